#pragma once

#include <algorithm>
#include <chrono>
#include <fstream>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsmp/error.hpp"
#include "fsmp/generators.hpp"
#include "fsmp/graph.hpp"
#include "fsmp/preclusion.hpp"

namespace fsmp {

enum class EvidenceMode { Exhaustive, Probe };

inline std::string_view to_string(EvidenceMode m) { return m == EvidenceMode::Exhaustive ? "exhaustive" : "probe"; }

inline EvidenceMode parse_mode(std::string_view text)
{
    if (text == "exhaustive")
        return EvidenceMode::Exhaustive;
    if (text == "probe")
        return EvidenceMode::Probe;
    throw Error(ErrorKind::InvalidSpec, "unknown mode '" + std::string(text) + "'");
}

/// One known closed-form value to check.
struct VerificationCase {
    std::string name;
    std::string spec;
    Variant variant = Variant::FSMP;
    std::size_t expect = 0;
    std::optional<bool> expect_trivial;
    EvidenceMode mode = EvidenceMode::Exhaustive;
    std::uint64_t budget = kDefaultBudget;
    std::uint64_t seed = 0;
    std::uint64_t trials = 100'000; ///< per size, probe mode only
    std::string anchor;             ///< the closed-form statement being checked
};

enum class Verdict { Pass, Fail, BudgetExceeded, HypothesisUnmet };

inline std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::BudgetExceeded: return "budget_exceeded";
    case Verdict::HypothesisUnmet: return "hypothesis_unmet";
    }
    return "?";
}

struct CaseResult {
    std::string name;
    std::string spec;
    Variant variant = Variant::FSMP;
    EvidenceMode mode = EvidenceMode::Exhaustive;
    Verdict verdict = Verdict::Fail;
    std::size_t expected = 0;
    std::optional<std::size_t> computed;
    std::optional<bool> expected_trivial;
    std::optional<bool> computed_trivial;
    std::uint64_t oracle_calls = 0;
    std::string detail;
    std::uint64_t wall_time_ms = 0;
};

struct SuiteReport {
    std::vector<CaseResult> cases; ///< sorted by name

    bool passed() const
    {
        return std::none_of(cases.begin(), cases.end(), [](const CaseResult& c) { return c.verdict == Verdict::Fail; });
    }
};

/// Closed-form values checkable on a desk machine. Tori of three or more
/// dimensions are out of exhaustive reach and run as probes.
inline std::vector<VerificationCase> default_suite()
{
    std::vector<VerificationCase> suite;
    for (std::size_t n = 3; n <= 8; ++n)
        suite.push_back({"fsmp-complete-" + std::to_string(n), "complete:" + std::to_string(n), Variant::FSMP, n - 2,
            std::nullopt, EvidenceMode::Exhaustive, 10'000'000, 0, 0, "fsmp(K_n) = n - 2 for n >= 3"});
    for (std::size_t n = 4; n <= 9; ++n)
        suite.push_back({"smp-cycle-" + std::to_string(n), "cycle:" + std::to_string(n), Variant::SMP, 2, std::nullopt,
            EvidenceMode::Exhaustive, 1'000'000, 0, 0, "smp(C_n) = 2 for n >= 3"});
    suite.push_back({"fsmp-torus-5-5", "torus:5,5", Variant::FSMP, 4, true, EvidenceMode::Exhaustive, 2'000'000, 0, 0,
        "fsmp(T(k1,k2)) = 4 for odd k1,k2 >= 5, every optimal set trivial"});
    suite.push_back({"fmp-torus-4-4", "torus:4,4", Variant::FMP, 4, true, EvidenceMode::Exhaustive, 2'000'000, 0, 0,
        "fmp(T(k1,...,kn)) = 2n for tori of even order"});
    suite.push_back({"mp-torus-4-4", "torus:4,4", Variant::MP, 4, true, EvidenceMode::Exhaustive, 2'000'000, 0, 0,
        "mp(T(k1,...,kn)) = 2n for tori of even order, optimal sets trivial"});
    suite.push_back({"smp-torus-5-5", "torus:5,5", Variant::SMP, 4, true, EvidenceMode::Exhaustive, 2'000'000, 0, 0,
        "T(k1,k2) with odd k1,k2 >= 5 is super strong matched"});
    suite.push_back({"fsmp-torus-5-5-5", "torus:5,5,5", Variant::FSMP, 6, std::nullopt, EvidenceMode::Probe, 0, 0,
        100'000, "fsmp(T(k1,...,kn)) = 2n for odd k_i >= 5"});
    return suite;
}

inline std::vector<VerificationCase> parse_suite(const nlohmann::json& j)
{
    if (!j.is_array())
        throw Error(ErrorKind::ParseError, "suite must be a JSON array");
    std::vector<VerificationCase> suite;
    for (const auto& item : j) {
        try {
            VerificationCase c;
            c.name = item.at("name").get<std::string>();
            c.spec = item.at("spec").get<std::string>();
            c.variant = parse_variant(item.at("variant").get<std::string>());
            c.expect = item.at("expect").get<std::size_t>();
            if (item.contains("expect_trivial") && !item["expect_trivial"].is_null())
                c.expect_trivial = item["expect_trivial"].get<bool>();
            c.mode = parse_mode(item.value("mode", std::string("exhaustive")));
            c.budget = item.value("budget", kDefaultBudget);
            c.seed = item.value("seed", std::uint64_t{0});
            c.trials = item.value("trials", std::uint64_t{100'000});
            c.anchor = item.value("anchor", std::string());
            suite.push_back(std::move(c));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::ParseError, std::string("suite entry: ") + e.what());
        }
    }
    return suite;
}

inline std::vector<VerificationCase> load_suite(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::IoError, "cannot open suite '" + path + "'");
    try {
        return parse_suite(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
}

inline nlohmann::json to_json(const VerificationCase& c)
{
    return {{"name", c.name}, {"spec", c.spec}, {"variant", to_string(c.variant)}, {"expect", c.expect},
        {"expect_trivial", c.expect_trivial ? nlohmann::json(*c.expect_trivial) : nlohmann::json()},
        {"mode", to_string(c.mode)}, {"budget", c.budget}, {"seed", c.seed}, {"trials", c.trials},
        {"anchor", c.anchor}};
}

namespace detail {

inline std::uint64_t millis_since(std::chrono::steady_clock::time_point start)
{
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
}

/// Probe evidence for an expected value: a precluding set of that size and
/// none among `trials` random sets of each smaller size.
inline void run_probe_case(const Graph& g, const VerificationCase& c, unsigned threads, CaseResult& out)
{
    const std::size_t delta = min_degree(g);
    std::ostringstream detail;
    bool upper_ok = false;
    if (c.expect == delta && isolating_upper_bound(g, c.variant) == delta) {
        upper_ok = true;
        detail << "isolating set of size " << delta << " precludes";
    } else if (c.expect >= 1) {
        ProbeReport p = randomized_preclusion_probe(g, {c.variant, c.expect, c.trials, c.seed, false, threads});
        out.oracle_calls += p.trials;
        upper_ok = p.precluding_found > 0;
        detail << "size " << c.expect << ": " << p.precluding_found << " precluding in " << p.trials << " trials";
    }
    if (!upper_ok) {
        out.verdict = Verdict::Fail;
        out.detail = "no precluding set of the expected size found";
        return;
    }
    for (std::size_t size = 1; size < c.expect; ++size) {
        ProbeReport p = randomized_preclusion_probe(g, {c.variant, size, c.trials, c.seed, false, threads});
        out.oracle_calls += p.trials;
        if (p.precluding_found > 0) {
            out.verdict = Verdict::Fail;
            out.computed = size;
            out.detail = "precluding set of size " + std::to_string(size) + " found at trial "
                + std::to_string(*p.first_witness_trial);
            return;
        }
    }
    detail << "; no counterexample in " << c.trials << " trials at each size 1.." << (c.expect - 1);
    out.computed = c.expect;
    out.verdict = Verdict::Pass;
    out.detail = detail.str();
}

} // namespace detail

inline CaseResult run_case(const VerificationCase& c, unsigned threads = 0)
{
    const auto start = std::chrono::steady_clock::now();
    CaseResult out;
    out.name = c.name;
    out.spec = c.spec;
    out.variant = c.variant;
    out.mode = c.mode;
    out.expected = c.expect;
    out.expected_trivial = c.expect_trivial;
    const Graph g = generate(c.spec);
    if (c.mode == EvidenceMode::Probe) {
        detail::run_probe_case(g, c, threads, out);
        out.wall_time_ms = detail::millis_since(start);
        return out;
    }
    SearchOptions options;
    options.enumerate_all = c.expect_trivial.has_value();
    options.budget = c.budget;
    options.threads = threads;
    try {
        PreclusionReport r = preclusion_number(g, c.variant, options);
        out.computed = r.number;
        out.computed_trivial = r.all_optimal_trivial;
        out.oracle_calls = r.subsets_examined;
        bool ok = !r.already_precluded && r.number == c.expect;
        if (c.expect_trivial)
            ok = ok && r.all_optimal_trivial == c.expect_trivial;
        out.verdict = ok ? Verdict::Pass : Verdict::Fail;
        std::ostringstream detail;
        if (r.already_precluded)
            detail << "graph already lacks the property; ";
        if (r.optimal_count)
            detail << *r.optimal_count << " optimal sets";
        else
            detail << "first witness found";
        out.detail = detail.str();
    } catch (const BudgetExceededError& e) {
        out.verdict = Verdict::BudgetExceeded;
        out.detail = "cleared sizes 1.." + std::to_string(e.largest_cleared_size);
    }
    out.wall_time_ms = detail::millis_since(start);
    return out;
}

/// Runs every case and reports them sorted by name. The suite passes iff no case fails.
inline SuiteReport verify_known_results(const std::vector<VerificationCase>& suite, unsigned threads = 0)
{
    SuiteReport report;
    for (const VerificationCase& c : suite)
        report.cases.push_back(run_case(c, threads));
    std::stable_sort(report.cases.begin(), report.cases.end(),
        [](const CaseResult& a, const CaseResult& b) { return a.name < b.name; });
    return report;
}

inline nlohmann::json to_json(const CaseResult& c, bool with_timing = true)
{
    auto opt = [](const auto& o) { return o ? nlohmann::json(*o) : nlohmann::json(); };
    return {{"name", c.name}, {"spec", c.spec}, {"variant", to_string(c.variant)}, {"mode", to_string(c.mode)},
        {"verdict", to_string(c.verdict)}, {"expected", c.expected}, {"computed", opt(c.computed)},
        {"expected_trivial", opt(c.expected_trivial)}, {"computed_trivial", opt(c.computed_trivial)},
        {"oracle_calls", c.oracle_calls}, {"detail", c.detail}, {"wall_time_ms", with_timing ? c.wall_time_ms : 0}};
}

inline nlohmann::json to_json(const SuiteReport& r, bool with_timing = true)
{
    nlohmann::json cases = nlohmann::json::array();
    for (const CaseResult& c : r.cases)
        cases.push_back(to_json(c, with_timing));
    return {{"passed", r.passed()}, {"cases", cases}};
}

inline void print_table(std::ostream& out, const SuiteReport& r)
{
    auto tri = [](const std::optional<bool>& b) -> std::string {
        if (!b)
            return "-";
        return *b ? "yes" : "no";
    };
    out << std::left << std::setw(22) << "case" << std::setw(6) << "var" << std::setw(11) << "mode" << std::setw(9)
        << "expect" << std::setw(9) << "got" << std::setw(9) << "trivial" << std::setw(17) << "verdict"
        << "ms\n";
    for (const CaseResult& c : r.cases) {
        out << std::left << std::setw(22) << c.name << std::setw(6) << to_string(c.variant) << std::setw(11)
            << to_string(c.mode) << std::setw(9) << c.expected << std::setw(9)
            << (c.computed ? std::to_string(*c.computed) : std::string("-")) << std::setw(9)
            << tri(c.computed_trivial) << std::setw(17) << to_string(c.verdict) << c.wall_time_ms << '\n';
    }
    out << (r.passed() ? "suite passed" : "suite FAILED") << '\n';
}

struct ProductProbeLevel {
    std::size_t size = 0;
    std::uint64_t sets_checked = 0;
    std::uint64_t precluding_found = 0;
};

struct ProductTheoremReport {
    std::string base_spec;
    std::size_t cycle_length = 0;
    std::size_t base_min_degree = 0;
    bool hypothesis_met = false;
    std::string hypothesis_detail;
    std::size_t target = 0; ///< min degree of the base plus two
    std::optional<FaultSet> upper_bound_witness;
    EvidenceMode lower_bound_mode = EvidenceMode::Exhaustive;
    std::vector<ProductProbeLevel> levels;
    std::optional<FaultSet> counterexample;
    Verdict verdict = Verdict::Fail;
    std::uint64_t wall_time_ms = 0;
};

struct ProductTheoremOptions {
    EvidenceMode mode = EvidenceMode::Probe;
    std::uint64_t budget = kDefaultBudget;
    std::uint64_t seed = 0;
    std::uint64_t trials = 100'000;
    unsigned threads = 0;
};

/// Checks fsmp(G x C_n) = delta(G) + 2 for a fractional strongly super matched
/// G with delta(G) >= 4 and odd n >= 5. The base hypothesis is checked first;
/// an unmet hypothesis is reported as such, never as a counterexample.
inline ProductTheoremReport verify_product_theorem(const GeneratorSpec& base, std::size_t cycle_length,
    const ProductTheoremOptions& options = {})
{
    if (cycle_length < 5 || cycle_length % 2 == 0)
        throw Error(ErrorKind::HypothesisViolated,
            "cycle length must be odd and at least 5, got " + std::to_string(cycle_length));
    const auto start = std::chrono::steady_clock::now();
    ProductTheoremReport out;
    out.base_spec = to_string(base);
    out.cycle_length = cycle_length;
    out.lower_bound_mode = options.mode;

    const Graph g = generate(base);
    out.base_min_degree = min_degree(g);
    out.target = out.base_min_degree + 2;
    auto finish = [&](Verdict v) {
        out.verdict = v;
        out.wall_time_ms = detail::millis_since(start);
        return out;
    };

    if (out.base_min_degree < 4) {
        out.hypothesis_detail = "minimum degree " + std::to_string(out.base_min_degree) + " < 4";
        return finish(Verdict::HypothesisUnmet);
    }
    SearchOptions hyp;
    hyp.budget = options.budget;
    hyp.threads = options.threads;
    try {
        SuperMatchedResult s = is_fractional_strongly_super_matched(g, hyp);
        std::ostringstream d;
        d << "fsmp = " << s.evidence.number << ", min degree = " << s.min_degree << ", all optimal sets trivial: "
          << (s.evidence.all_optimal_trivial.value_or(false) ? "yes" : "no");
        out.hypothesis_detail = d.str();
        if (!s.value)
            return finish(Verdict::HypothesisUnmet);
    } catch (const BudgetExceededError& e) {
        out.hypothesis_detail = std::string("hypothesis check over budget: ") + e.what();
        return finish(Verdict::BudgetExceeded);
    }
    out.hypothesis_met = true;

    const Graph product = cartesian_product(g, cycle_graph(cycle_length));

    // Upper bound: all edges at a minimum-degree vertex.
    const Vertex v = min_degree_vertex(product);
    FaultSet isolating;
    for (Vertex w : product.neighbors(v))
        isolating.edges.emplace_back(v, w);
    std::sort(isolating.edges.begin(), isolating.edges.end());
    if (isolating.size() != out.target || survives(apply_faults(product, isolating).graph, Variant::FSMP))
        return finish(Verdict::Fail);
    out.upper_bound_witness = isolating;

    const detail::FaultDomain domain = detail::make_domain(product, Variant::FSMP, false);
    std::uint64_t needed = 0;
    for (std::size_t k = 1; k < out.target; ++k)
        needed = detail::saturating_add(needed, detail::binomial(domain.size(), k));
    if (options.mode == EvidenceMode::Exhaustive && needed > options.budget)
        out.lower_bound_mode = EvidenceMode::Probe;

    const unsigned threads = detail::resolve_threads(options.threads);
    for (std::size_t k = 1; k < out.target; ++k) {
        ProductProbeLevel level{k, 0, 0};
        if (out.lower_bound_mode == EvidenceMode::Exhaustive) {
            detail::LevelOutcome r = detail::search_level(product, domain, Variant::FSMP, k, false, threads);
            level.sets_checked = r.examined;
            level.precluding_found = r.hits.size();
            if (!r.hits.empty())
                out.counterexample = detail::FaultEvaluator(product, domain, Variant::FSMP).to_fault_set(r.hits.front());
        } else {
            ProbeReport p = randomized_preclusion_probe(
                product, {Variant::FSMP, k, options.trials, options.seed, false, options.threads});
            level.sets_checked = p.trials;
            level.precluding_found = p.precluding_found;
            out.counterexample = p.first_witness;
        }
        out.levels.push_back(level);
        if (level.precluding_found > 0)
            return finish(Verdict::Fail);
    }
    return finish(Verdict::Pass);
}

inline nlohmann::json to_json(const ProductTheoremReport& r, bool with_timing = true)
{
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : r.levels)
        levels.push_back({{"size", l.size}, {"sets_checked", l.sets_checked}, {"precluding_found", l.precluding_found}});
    return {{"base", r.base_spec}, {"cycle_length", r.cycle_length}, {"base_min_degree", r.base_min_degree},
        {"hypothesis_met", r.hypothesis_met}, {"hypothesis_detail", r.hypothesis_detail}, {"target", r.target},
        {"upper_bound_witness", r.upper_bound_witness ? to_json(*r.upper_bound_witness) : nlohmann::json()},
        {"lower_bound_mode", to_string(r.lower_bound_mode)}, {"levels", levels},
        {"counterexample", r.counterexample ? to_json(*r.counterexample) : nlohmann::json()},
        {"verdict", to_string(r.verdict)}, {"wall_time_ms", with_timing ? r.wall_time_ms : 0}};
}

} // namespace fsmp
