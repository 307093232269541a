#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsmp/error.hpp"
#include "fsmp/generators.hpp"
#include "fsmp/graph.hpp"
#include "fsmp/harness.hpp"
#include "fsmp/matching.hpp"
#include "fsmp/preclusion.hpp"

namespace fsmp::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kBudget = 3 };

struct CliConfig {
    std::string command;
    std::string graph;
    std::string variant = "fsmp";
    bool enumerate_all = false;
    bool heuristic = false;
    std::optional<std::uint64_t> budget;
    std::uint64_t seed = 0;
    std::uint64_t trials = 100'000;
    std::size_t size = 1;
    bool directed = false;
    std::string output = "table";
    std::string json_path;
    unsigned threads = 0;
    bool no_timing = false;
    std::string vertices;
    std::string edges;
    std::string suite = "default";
    std::size_t cycle = 5;
    std::string mode = "probe";
};

/// Budget from --budget, else FSMP_LAB_BUDGET, else the library default.
inline std::uint64_t effective_budget(const CliConfig& cfg)
{
    if (cfg.budget)
        return *cfg.budget;
    if (const char* env = std::getenv("FSMP_LAB_BUDGET")) {
        try {
            std::size_t used = 0;
            const unsigned long long value = std::stoull(env, &used);
            if (used == std::string(env).size())
                return value;
        } catch (const std::exception&) {
        }
        throw Error(ErrorKind::InvalidSpec, std::string("FSMP_LAB_BUDGET is not an integer: '") + env + "'");
    }
    return kDefaultBudget;
}

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep))
        if (!item.empty())
            parts.push_back(item);
    return parts;
}

inline Vertex parse_vertex(const std::string& token)
{
    std::size_t used = 0;
    unsigned long value = 0;
    try {
        value = std::stoul(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size() || token.empty() || token[0] == '-')
        throw Error(ErrorKind::InvalidSpec, "bad vertex '" + token + "'");
    return static_cast<Vertex>(value);
}

/// "0,3" and "1-2,3-4" into a fault set.
inline FaultSet parse_faults(const std::string& vertices, const std::string& edges)
{
    std::vector<Vertex> vs;
    for (const auto& t : split(vertices, ','))
        vs.push_back(parse_vertex(t));
    std::vector<Edge> es;
    for (const auto& t : split(edges, ',')) {
        auto dash = t.find('-');
        if (dash == std::string::npos)
            throw Error(ErrorKind::InvalidSpec, "bad edge '" + t + "', expected u-v");
        es.emplace_back(parse_vertex(t.substr(0, dash)), parse_vertex(t.substr(dash + 1)));
    }
    return FaultSet(std::move(vs), std::move(es));
}

inline std::string describe(const FaultSet& f)
{
    std::ostringstream out;
    out << "vertices {";
    for (std::size_t i = 0; i < f.vertices.size(); ++i)
        out << (i ? "," : "") << f.vertices[i];
    out << "} edges {";
    for (std::size_t i = 0; i < f.edges.size(); ++i)
        out << (i ? "," : "") << f.edges[i].u << "-" << f.edges[i].v;
    out << "}";
    return out.str();
}

class Emitter {
public:
    Emitter(const CliConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

    bool json_stdout() const { return cfg_.output == "json"; }

    /// Writes the JSON document to stdout (json output) and to --json PATH when given.
    void json(const nlohmann::json& j) const
    {
        if (json_stdout())
            out_ << j.dump(2) << '\n';
        if (!cfg_.json_path.empty()) {
            std::ofstream file(cfg_.json_path);
            if (!file)
                throw Error(ErrorKind::IoError, "cannot write '" + cfg_.json_path + "'");
            file << j.dump(2) << '\n';
        }
    }

private:
    const CliConfig& cfg_;
    std::ostream& out_;
};

inline int cmd_oracle(const CliConfig& cfg, std::ostream& out)
{
    const Graph g = generate(cfg.graph);
    const MatchingResult m = max_matching(g);
    const auto f = fractional_pm(g);
    Emitter emit(cfg, out);
    nlohmann::json j{{"vertices", g.vertex_count()}, {"edges", g.edge_count()}, {"max_matching", m.size},
        {"perfect_matching", m.covers_all}, {"almost_perfect_matching", m.covers_all_but_one},
        {"fractional_perfect_matching", f.has_value()}, {"witness", f ? to_json(*f) : nlohmann::json()}};
    if (!emit.json_stdout()) {
        out << "graph: " << g.vertex_count() << " vertices, " << g.edge_count() << " edges\n";
        out << "maximum matching: " << m.size
            << (m.covers_all ? " (perfect)" : m.covers_all_but_one ? " (almost perfect)" : "") << '\n';
        if (f) {
            out << "fractional perfect matching found\n";
            for (std::size_t i = 0; i < f->edges.size(); ++i)
                if (f->weights[i].twice != 0)
                    out << "  " << f->edges[i].u << "-" << f->edges[i].v << " " << to_string(f->weights[i]) << '\n';
        } else {
            out << "no fractional perfect matching\n";
        }
    }
    emit.json(j);
    return kOk;
}

inline int cmd_number(const CliConfig& cfg, std::ostream& out)
{
    const Graph g = generate(cfg.graph);
    SearchOptions options;
    options.enumerate_all = cfg.enumerate_all;
    options.budget = effective_budget(cfg);
    options.threads = cfg.threads;
    options.heuristic_pruning = cfg.heuristic;
    const Variant variant = parse_variant(cfg.variant);
    const PreclusionReport r = preclusion_number(g, variant, options);
    Emitter emit(cfg, out);
    if (!emit.json_stdout()) {
        out << to_string(variant) << " number: " << r.number << '\n';
        out << "witness: " << describe(r.witness) << '\n';
        if (r.already_precluded)
            out << "graph already lacks the property\n";
        if (r.optimal_count)
            out << "optimal sets: " << *r.optimal_count << ", all trivial: "
                << (*r.all_optimal_trivial ? "yes" : "no") << '\n';
        out << "subsets examined: " << r.subsets_examined << (r.heuristic ? " (heuristic domain)" : "") << '\n';
    }
    emit.json(to_json(r, !cfg.no_timing));
    return kOk;
}

inline int cmd_classify(const CliConfig& cfg, std::ostream& out)
{
    const Graph g = generate(cfg.graph);
    const FaultSet f = parse_faults(cfg.vertices, cfg.edges);
    const Variant variant = parse_variant(cfg.variant);
    const FaultClass c = classify_fault_set(g, f, variant);
    Emitter emit(cfg, out);
    if (!emit.json_stdout())
        out << to_string(c) << '\n';
    emit.json({{"variant", to_string(variant)}, {"faults", to_json(f)}, {"class", to_string(c)}});
    return kOk;
}

inline int cmd_super(const CliConfig& cfg, std::ostream& out)
{
    const Graph g = generate(cfg.graph);
    SearchOptions options;
    options.budget = effective_budget(cfg);
    options.threads = cfg.threads;
    const SuperMatchedResult s = is_fractional_strongly_super_matched(g, options);
    Emitter emit(cfg, out);
    if (!emit.json_stdout()) {
        out << "fractional strongly super matched: " << (s.value ? "yes" : "no") << '\n';
        out << "fsmp = " << s.evidence.number << ", minimum degree = " << s.min_degree << ", optimal sets = "
            << s.evidence.optimal_count.value_or(0) << ", all trivial: "
            << (s.evidence.all_optimal_trivial.value_or(false) ? "yes" : "no") << '\n';
    }
    emit.json({{"super_matched", s.value}, {"min_degree", s.min_degree}, {"evidence", to_json(s.evidence, !cfg.no_timing)}});
    return kOk;
}

inline int cmd_probe(const CliConfig& cfg, std::ostream& out)
{
    const Graph g = generate(cfg.graph);
    ProbeOptions options;
    options.variant = parse_variant(cfg.variant);
    options.size = cfg.size;
    options.trials = cfg.trials;
    options.seed = cfg.seed;
    options.directed = cfg.directed;
    options.threads = cfg.threads;
    const ProbeReport r = randomized_preclusion_probe(g, options);
    Emitter emit(cfg, out);
    if (!emit.json_stdout()) {
        out << r.precluding_found << " precluding sets of size " << r.size << " in " << r.trials << " trials (seed "
            << r.seed << ")\n";
        if (r.first_witness)
            out << "first at trial " << *r.first_witness_trial << ": " << describe(*r.first_witness) << '\n';
    }
    emit.json(to_json(r));
    return kOk;
}

inline int cmd_verify(const CliConfig& cfg, std::ostream& out)
{
    const std::vector<VerificationCase> suite = cfg.suite == "default" ? default_suite() : load_suite(cfg.suite);
    const SuiteReport r = verify_known_results(suite, cfg.threads);
    Emitter emit(cfg, out);
    if (!emit.json_stdout())
        print_table(out, r);
    emit.json(to_json(r, !cfg.no_timing));
    return r.passed() ? kOk : kVerificationFailed;
}

inline int cmd_product(const CliConfig& cfg, std::ostream& out)
{
    ProductTheoremOptions options;
    options.mode = parse_mode(cfg.mode);
    options.budget = effective_budget(cfg);
    options.seed = cfg.seed;
    options.trials = cfg.trials;
    options.threads = cfg.threads;
    const ProductTheoremReport r = verify_product_theorem(parse_generator_spec(cfg.graph), cfg.cycle, options);
    Emitter emit(cfg, out);
    if (!emit.json_stdout()) {
        out << "base " << r.base_spec << " x C" << r.cycle_length << ", target fsmp = " << r.target << '\n';
        out << "hypothesis: " << (r.hypothesis_met ? "met" : "unmet") << " (" << r.hypothesis_detail << ")\n";
        if (r.upper_bound_witness)
            out << "upper bound witness: " << describe(*r.upper_bound_witness) << '\n';
        for (const auto& l : r.levels)
            out << "size " << l.size << ": " << l.precluding_found << " precluding in " << l.sets_checked << " "
                << (r.lower_bound_mode == EvidenceMode::Exhaustive ? "sets (exhaustive)" : "trials (probe)") << '\n';
        out << "verdict: " << to_string(r.verdict) << '\n';
    }
    emit.json(to_json(r, !cfg.no_timing));
    if (r.verdict == Verdict::Fail)
        return kVerificationFailed;
    if (r.verdict == Verdict::BudgetExceeded)
        return kBudget;
    return kOk;
}

} // namespace detail

/// Entry point shared by the fsmp-lab binary and the tests.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CliConfig cfg;
    CLI::App app{"Matching preclusion numbers of finite simple graphs", "fsmp-lab"};
    app.require_subcommand(1, 1);

    auto add_graph = [&](CLI::App* sub) {
        sub->add_option("--graph", cfg.graph, "generator spec or file:PATH")->required();
    };
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--output", cfg.output, "table or json")->check(CLI::IsMember({"table", "json"}));
        sub->add_option("--json", cfg.json_path, "also write the JSON report to this path");
    };
    auto add_search = [&](CLI::App* sub) {
        sub->add_option("--budget", cfg.budget, "oracle-call limit");
        sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
        sub->add_flag("--no-timing", cfg.no_timing, "report wall_time_ms as 0");
    };
    auto add_variant = [&](CLI::App* sub) {
        sub->add_option("--variant", cfg.variant, "mp, smp, fmp or fsmp");
    };

    auto* oracle = app.add_subcommand("oracle", "matching and fractional perfect matching oracles");
    add_graph(oracle);
    add_output(oracle);

    auto* number = app.add_subcommand("number", "compute a preclusion number");
    add_graph(number);
    add_variant(number);
    add_search(number);
    add_output(number);
    number->add_flag("--enumerate-all", cfg.enumerate_all, "collect and classify every optimal set");
    number->add_flag("--heuristic", cfg.heuristic, "restrict faults to neighbourhoods of min-degree vertices");

    auto* classify = app.add_subcommand("classify", "classify a fault set");
    add_graph(classify);
    add_variant(classify);
    add_output(classify);
    classify->add_option("--vertices", cfg.vertices, "comma-separated vertex faults");
    classify->add_option("--edges", cfg.edges, "comma-separated edge faults u-v");

    auto* super = app.add_subcommand("super", "fractional strongly super matched test");
    add_graph(super);
    add_search(super);
    add_output(super);

    auto* probe = app.add_subcommand("probe", "randomised preclusion probe");
    add_graph(probe);
    add_variant(probe);
    add_output(probe);
    probe->add_option("--size", cfg.size, "fault set size")->required();
    probe->add_option("--trials", cfg.trials, "number of samples");
    probe->add_option("--seed", cfg.seed, "PRNG seed");
    probe->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    probe->add_flag("--directed", cfg.directed, "make trial 0 the isolating set of a min-degree vertex");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", cfg.suite, "'default' or a suite JSON file");
    add_search(verify);
    add_output(verify);

    auto* product = app.add_subcommand("product-theorem", "check fsmp(G x C_n) = delta(G) + 2");
    add_graph(product);
    add_search(product);
    add_output(product);
    product->add_option("--cycle", cfg.cycle, "odd cycle length n >= 5");
    product->add_option("--mode", cfg.mode, "exhaustive or probe")->check(CLI::IsMember({"exhaustive", "probe"}));
    product->add_option("--trials", cfg.trials, "probe trials per size");
    product->add_option("--seed", cfg.seed, "PRNG seed");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*oracle)
            return detail::cmd_oracle(cfg, out);
        if (*number)
            return detail::cmd_number(cfg, out);
        if (*classify)
            return detail::cmd_classify(cfg, out);
        if (*super)
            return detail::cmd_super(cfg, out);
        if (*probe)
            return detail::cmd_probe(cfg, out);
        if (*verify)
            return detail::cmd_verify(cfg, out);
        if (*product)
            return detail::cmd_product(cfg, out);
    } catch (const BudgetExceededError& e) {
        err << "fsmp-lab: " << e.what() << " (sizes 1.." << e.largest_cleared_size << " cleared";
        if (e.upper_bound)
            err << ", upper bound " << *e.upper_bound;
        err << ")\n";
        return kBudget;
    } catch (const Error& e) {
        err << "fsmp-lab: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

} // namespace fsmp::cli
