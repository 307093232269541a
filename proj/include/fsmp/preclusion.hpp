#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "fsmp/error.hpp"
#include "fsmp/graph.hpp"
#include "fsmp/matching.hpp"

namespace fsmp {

/// MP and FMP delete edges only; SMP and FSMP also delete vertices.
/// MP and SMP ask for a perfect or almost-perfect matching, FMP and FSMP
/// for a fractional perfect matching.
enum class Variant { MP, SMP, FMP, FSMP };

inline constexpr bool allows_vertex_faults(Variant v) { return v == Variant::SMP || v == Variant::FSMP; }
inline constexpr bool is_fractional(Variant v) { return v == Variant::FMP || v == Variant::FSMP; }

inline std::string_view to_string(Variant v)
{
    switch (v) {
    case Variant::MP: return "MP";
    case Variant::SMP: return "SMP";
    case Variant::FMP: return "FMP";
    case Variant::FSMP: return "FSMP";
    }
    return "?";
}

inline Variant parse_variant(std::string_view text)
{
    std::string upper;
    for (char c : text)
        upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (upper == "MP")
        return Variant::MP;
    if (upper == "SMP")
        return Variant::SMP;
    if (upper == "FMP")
        return Variant::FMP;
    if (upper == "FSMP")
        return Variant::FSMP;
    throw Error(ErrorKind::InvalidSpec, "unknown variant '" + std::string(text) + "'");
}

/// The survival property a preclusion set must destroy.
inline bool survives(const Graph& g, Variant v)
{
    return is_fractional(v) ? has_fractional_pm(g) : has_pm_or_apm(g);
}

inline bool has_isolated_vertex(const Graph& g)
{
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) == 0)
            return true;
    return false;
}

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

struct SearchOptions {
    bool enumerate_all = false;
    std::uint64_t budget = kDefaultBudget; ///< maximum oracle calls, checked per size level
    unsigned threads = 0;                  ///< 0 picks the hardware concurrency
    bool heuristic_pruning = false;        ///< restrict faults to the neighbourhood of min-degree vertices
};

struct PreclusionReport {
    Variant variant = Variant::FSMP;
    std::size_t number = 0;
    FaultSet witness;
    std::optional<bool> all_optimal_trivial;
    std::optional<std::uint64_t> optimal_count;
    std::vector<FaultSet> optimal_sets; ///< filled only when enumerating
    std::uint64_t subsets_examined = 0;
    bool already_precluded = false;
    bool heuristic = false;
    std::uint64_t wall_time_ms = 0;
};

/// Raised when the next size level would exceed the oracle-call budget.
class BudgetExceededError : public Error {
public:
    BudgetExceededError(const std::string& what, std::size_t cleared, std::optional<std::size_t> upper)
        : Error(ErrorKind::BudgetExceeded, what), largest_cleared_size(cleared), upper_bound(upper)
    {
    }

    std::size_t largest_cleared_size; ///< every set up to this size was examined and none precludes
    std::optional<std::size_t> upper_bound;
};

enum class FaultClass { NotPrecluding, Trivial, Nontrivial };

inline std::string_view to_string(FaultClass c)
{
    switch (c) {
    case FaultClass::NotPrecluding: return "not_precluding";
    case FaultClass::Trivial: return "trivial";
    case FaultClass::Nontrivial: return "nontrivial";
    }
    return "?";
}

namespace detail {

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

/// Binomial coefficient, saturating at 2^64 - 1.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > kSaturated)
            return kSaturated;
    }
    return static_cast<std::uint64_t>(result);
}

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

/// Candidate fault elements: vertices first, then edges, each ascending.
struct FaultDomain {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<std::size_t> edge_ids; ///< index of edges[i] in the host graph

    std::size_t size() const { return vertices.size() + edges.size(); }
};

inline FaultDomain make_domain(const Graph& g, Variant variant, bool neighbourhood_only)
{
    FaultDomain d;
    std::vector<char> keep_vertex(g.vertex_count(), 1);
    if (neighbourhood_only && !g.empty()) {
        std::fill(keep_vertex.begin(), keep_vertex.end(), 0);
        const std::size_t delta = min_degree(g);
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (g.degree(v) != delta)
                continue;
            keep_vertex[v] = 1;
            for (Vertex w : g.neighbors(v))
                keep_vertex[w] = 1;
        }
    }
    if (allows_vertex_faults(variant))
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            if (keep_vertex[v])
                d.vertices.push_back(v);
    auto edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (neighbourhood_only && !keep_vertex[edges[i].u] && !keep_vertex[edges[i].v])
            continue;
        d.edges.push_back(edges[i]);
        d.edge_ids.push_back(i);
    }
    return d;
}

/// Lexicographic combinations of k indices from 0..m-1.
inline std::vector<std::size_t> unrank_combination(std::uint64_t rank, std::size_t m, std::size_t k)
{
    std::vector<std::size_t> combo(k);
    std::size_t x = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (;;) {
            std::uint64_t block = binomial(m - x - 1, k - i - 1);
            if (rank < block)
                break;
            rank -= block;
            ++x;
        }
        combo[i] = x++;
    }
    return combo;
}

inline bool next_combination(std::vector<std::size_t>& combo, std::size_t m)
{
    const std::size_t k = combo.size();
    std::size_t i = k;
    while (i > 0 && combo[i - 1] == m - k + i - 1)
        --i;
    if (i == 0)
        return false;
    ++combo[i - 1];
    for (std::size_t j = i; j < k; ++j)
        combo[j] = combo[j - 1] + 1;
    return true;
}

/// Per-worker scratch for evaluating fault sets given as domain indices.
class FaultEvaluator {
public:
    FaultEvaluator(const Graph& g, const FaultDomain& domain, Variant variant)
        : g_(g), domain_(domain), variant_(variant), vertex_gone_(g.vertex_count(), 0),
          edge_gone_(g.edge_count(), 0), relabel_(g.vertex_count())
    {
    }

    bool dominated(std::span<const std::size_t> combo)
    {
        const std::size_t nv = domain_.vertices.size();
        bool any_vertex = false;
        for (std::size_t idx : combo)
            if (idx < nv) {
                vertex_gone_[domain_.vertices[idx]] = 1;
                any_vertex = true;
            }
        bool result = false;
        if (any_vertex) {
            for (std::size_t idx : combo)
                if (idx >= nv) {
                    const Edge& e = domain_.edges[idx - nv];
                    if (vertex_gone_[e.u] || vertex_gone_[e.v]) {
                        result = true;
                        break;
                    }
                }
            for (std::size_t idx : combo)
                if (idx < nv)
                    vertex_gone_[domain_.vertices[idx]] = 0;
        }
        return result;
    }

    Graph survivor(std::span<const std::size_t> combo)
    {
        mark(combo, 1);
        std::size_t next = 0;
        for (Vertex v = 0; v < g_.vertex_count(); ++v)
            relabel_[v] = vertex_gone_[v] ? kNoVertex : static_cast<Vertex>(next++);
        std::vector<Edge> kept;
        kept.reserve(g_.edge_count());
        auto edges = g_.edges();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (edge_gone_[i])
                continue;
            const Vertex a = relabel_[edges[i].u];
            const Vertex b = relabel_[edges[i].v];
            if (a != kNoVertex && b != kNoVertex)
                kept.emplace_back(a, b);
        }
        mark(combo, 0);
        return Graph::from_sorted_edges(next, std::move(kept));
    }

    bool precludes(std::span<const std::size_t> combo) { return !survives(survivor(combo), variant_); }

    FaultSet to_fault_set(std::span<const std::size_t> combo) const
    {
        FaultSet f;
        const std::size_t nv = domain_.vertices.size();
        for (std::size_t idx : combo) {
            if (idx < nv)
                f.vertices.push_back(domain_.vertices[idx]);
            else
                f.edges.push_back(domain_.edges[idx - nv]);
        }
        return f;
    }

private:
    void mark(std::span<const std::size_t> combo, char value)
    {
        const std::size_t nv = domain_.vertices.size();
        for (std::size_t idx : combo) {
            if (idx < nv)
                vertex_gone_[domain_.vertices[idx]] = value;
            else
                edge_gone_[domain_.edge_ids[idx - nv]] = value;
        }
    }

    const Graph& g_;
    const FaultDomain& domain_;
    Variant variant_;
    std::vector<char> vertex_gone_;
    std::vector<char> edge_gone_;
    std::vector<Vertex> relabel_;
};

inline unsigned resolve_threads(unsigned requested)
{
    if (requested != 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

struct LevelOutcome {
    std::uint64_t examined = 0; ///< non-dominated sets evaluated, up to and including the first hit
    std::vector<std::vector<std::size_t>> hits; ///< lexicographic order
};

/// Searches all non-dominated k-subsets of the domain. Without `enumerate_all`
/// only the lexicographically first precluding set is kept, and `examined`
/// counts sets up to it, so the outcome does not depend on the thread count.
inline LevelOutcome search_level(const Graph& g, const FaultDomain& domain, Variant variant, std::size_t k,
    bool enumerate_all, unsigned threads)
{
    const std::size_t m = domain.size();
    const std::uint64_t total = binomial(m, k);
    LevelOutcome outcome;
    if (total == 0)
        return outcome;

    const std::uint64_t chunk_size = std::max<std::uint64_t>(2048, total / (std::uint64_t{threads} * 32) + 1);
    const std::uint64_t chunk_count = (total + chunk_size - 1) / chunk_size;

    struct ChunkResult {
        std::uint64_t examined = 0;
        std::vector<std::vector<std::size_t>> hits;
    };
    std::vector<ChunkResult> results(chunk_count);
    std::atomic<std::uint64_t> next_chunk{0};
    std::atomic<std::uint64_t> first_hit_chunk{std::numeric_limits<std::uint64_t>::max()};

    auto worker = [&] {
        FaultEvaluator eval(g, domain, variant);
        for (;;) {
            const std::uint64_t c = next_chunk.fetch_add(1);
            if (c >= chunk_count)
                return;
            if (!enumerate_all && c > first_hit_chunk.load())
                continue;
            ChunkResult& out = results[c];
            const std::uint64_t begin = c * chunk_size;
            const std::uint64_t end = std::min(total, begin + chunk_size);
            auto combo = unrank_combination(begin, m, k);
            for (std::uint64_t rank = begin; rank < end; ++rank) {
                if (rank != begin)
                    next_combination(combo, m);
                if (eval.dominated(combo))
                    continue;
                ++out.examined;
                if (eval.precludes(combo)) {
                    out.hits.push_back(combo);
                    if (!enumerate_all) {
                        std::uint64_t seen = first_hit_chunk.load();
                        while (c < seen && !first_hit_chunk.compare_exchange_weak(seen, c)) {
                        }
                        break;
                    }
                }
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }

    for (std::uint64_t c = 0; c < chunk_count; ++c) {
        outcome.examined += results[c].examined;
        for (auto& h : results[c].hits)
            outcome.hits.push_back(std::move(h));
        if (!enumerate_all && !outcome.hits.empty())
            break;
    }
    return outcome;
}

/// Size of the isolating set of a min-degree vertex when it precludes.
inline std::optional<std::size_t> isolating_upper_bound(const Graph& g, Variant variant)
{
    const Vertex v = min_degree_vertex(g);
    FaultSet f;
    for (Vertex w : g.neighbors(v))
        f.edges.emplace_back(v, w);
    std::sort(f.edges.begin(), f.edges.end());
    if (survives(apply_faults(g, f).graph, variant))
        return std::nullopt;
    return f.size();
}

} // namespace detail

/// Classifies a fault set: does it preclude, and if so, does it leave an isolated vertex.
inline FaultClass classify_fault_set(const Graph& g, const FaultSet& f, Variant variant)
{
    if (!allows_vertex_faults(variant) && !f.vertices.empty())
        throw Error(ErrorKind::InvalidFault,
            std::string(to_string(variant)) + " fault sets may not contain vertices");
    FaultedGraph faulted = apply_faults(g, f);
    if (survives(faulted.graph, variant))
        return FaultClass::NotPrecluding;
    return has_isolated_vertex(faulted.graph) ? FaultClass::Trivial : FaultClass::Nontrivial;
}

/// Smallest number of faults destroying the survival property, searched by
/// increasing size and, within a size, lexicographically over the canonical
/// encoding. Sets containing an edge incident to a deleted vertex are skipped.
inline PreclusionReport preclusion_number(const Graph& g, Variant variant, const SearchOptions& options = {})
{
    if (g.empty())
        throw Error(ErrorKind::EmptyGraph, "preclusion number of a graph without vertices");
    const auto start = std::chrono::steady_clock::now();
    auto elapsed_ms = [&] {
        return static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
    };

    PreclusionReport report;
    report.variant = variant;
    report.heuristic = options.heuristic_pruning;

    if (!survives(g, variant)) {
        report.already_precluded = true;
        if (options.enumerate_all) {
            report.optimal_count = 1;
            report.all_optimal_trivial = has_isolated_vertex(g);
            report.optimal_sets.push_back({});
        }
        report.wall_time_ms = elapsed_ms();
        return report;
    }

    const detail::FaultDomain domain = detail::make_domain(g, variant, options.heuristic_pruning);
    const unsigned threads = detail::resolve_threads(options.threads);
    const std::optional<std::size_t> upper = detail::isolating_upper_bound(g, variant);
    std::uint64_t examined = 0;

    for (std::size_t k = 1; k <= domain.size(); ++k) {
        const std::uint64_t level_total = detail::binomial(domain.size(), k);
        if (detail::saturating_add(examined, level_total) > options.budget)
            throw BudgetExceededError("size " + std::to_string(k) + " needs up to " + std::to_string(level_total)
                    + " oracle calls on top of " + std::to_string(examined) + ", budget "
                    + std::to_string(options.budget),
                k - 1, upper);
        detail::LevelOutcome level = detail::search_level(g, domain, variant, k, options.enumerate_all, threads);
        examined += level.examined;
        if (level.hits.empty())
            continue;

        detail::FaultEvaluator eval(g, domain, variant);
        report.number = k;
        report.witness = eval.to_fault_set(level.hits.front());
        if (options.enumerate_all) {
            bool all_trivial = true;
            for (const auto& hit : level.hits) {
                if (!has_isolated_vertex(eval.survivor(hit)))
                    all_trivial = false;
                report.optimal_sets.push_back(eval.to_fault_set(hit));
            }
            report.optimal_count = level.hits.size();
            report.all_optimal_trivial = all_trivial;
        }
        report.subsets_examined = examined;
        report.wall_time_ms = elapsed_ms();
        return report;
    }
    throw Error(ErrorKind::NoPreclusionSet,
        "no " + std::string(to_string(variant)) + " set exists: deleting every candidate keeps the property");
}

struct SuperMatchedResult {
    bool value = false;
    std::size_t min_degree = 0;
    PreclusionReport evidence;
};

/// fsmp(G) equals the minimum degree and every optimal FSMP set leaves an isolated vertex.
inline SuperMatchedResult is_fractional_strongly_super_matched(const Graph& g, SearchOptions options = {})
{
    options.enumerate_all = true;
    SuperMatchedResult out;
    out.min_degree = min_degree(g);
    out.evidence = preclusion_number(g, Variant::FSMP, options);
    out.value = !out.evidence.already_precluded && out.evidence.number == out.min_degree
        && out.evidence.all_optimal_trivial.value_or(false);
    return out;
}

// Randomness: std::mt19937_64 (its output sequence is fixed by the C++
// standard) seeded per block of trials through SplitMix64, with bounded
// integers drawn by rejection. No std::*_distribution is used, so probe
// results are identical across standard libraries and thread counts.

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform integer in [0, bound).
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        const std::uint64_t x = rng();
        if (x < limit)
            return x % bound;
    }
}

struct ProbeOptions {
    Variant variant = Variant::FSMP;
    std::size_t size = 1;
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 0;
    bool directed = false; ///< trial 0 is the isolating edge set of a min-degree vertex (padded with edges)
    unsigned threads = 0;
};

struct ProbeReport {
    Variant variant = Variant::FSMP;
    std::size_t size = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    bool directed = false;
    std::uint64_t precluding_found = 0;
    std::optional<FaultSet> first_witness;
    std::optional<std::uint64_t> first_witness_trial;
};

namespace detail {

inline constexpr std::uint64_t kProbeBlock = 1024;
inline constexpr int kMaxRejections = 100'000;

/// Floyd's algorithm: uniform k-subset of 0..m-1, sorted.
inline void sample_combination(std::mt19937_64& rng, std::size_t m, std::size_t k, std::vector<std::size_t>& out)
{
    out.clear();
    for (std::size_t j = m - k; j < m; ++j) {
        const auto t = static_cast<std::size_t>(uniform_below(rng, j + 1));
        if (std::find(out.begin(), out.end(), t) == out.end())
            out.push_back(t);
        else
            out.push_back(j);
    }
    std::sort(out.begin(), out.end());
}

inline std::vector<std::size_t> directed_combination(const Graph& g, const FaultDomain& domain, std::size_t size)
{
    const Vertex v = min_degree_vertex(g);
    const std::size_t nv = domain.vertices.size();
    std::vector<std::size_t> combo;
    for (std::size_t i = 0; i < domain.edges.size() && combo.size() < size; ++i)
        if (domain.edges[i].touches(v))
            combo.push_back(nv + i);
    for (std::size_t i = 0; i < domain.edges.size() && combo.size() < size; ++i)
        if (!domain.edges[i].touches(v))
            combo.push_back(nv + i);
    std::sort(combo.begin(), combo.end());
    return combo;
}

} // namespace detail

/// Samples uniformly random non-dominated fault sets of a fixed size and
/// counts those that preclude. Deterministic for a fixed seed.
inline ProbeReport randomized_preclusion_probe(const Graph& g, const ProbeOptions& options)
{
    if (g.empty())
        throw Error(ErrorKind::EmptyGraph, "probe on a graph without vertices");
    const detail::FaultDomain domain = detail::make_domain(g, options.variant, false);
    if (options.size < 1 || options.size > domain.size())
        throw Error(ErrorKind::InvalidFault, "probe size " + std::to_string(options.size) + " outside 1.."
                + std::to_string(domain.size()));
    if (options.trials < 1)
        throw Error(ErrorKind::InvalidFault, "probe needs at least one trial");
    if (options.directed && options.size < min_degree(g))
        throw Error(ErrorKind::InvalidFault, "directed probe needs size at least the minimum degree");

    ProbeReport report;
    report.variant = options.variant;
    report.size = options.size;
    report.trials = options.trials;
    report.seed = options.seed;
    report.directed = options.directed;

    const std::uint64_t blocks = (options.trials + detail::kProbeBlock - 1) / detail::kProbeBlock;
    struct BlockResult {
        std::uint64_t found = 0;
        std::optional<std::uint64_t> first_trial;
        std::vector<std::size_t> first_combo;
        bool sampling_failed = false;
    };
    std::vector<BlockResult> results(blocks);
    std::atomic<std::uint64_t> next_block{0};

    auto worker = [&] {
        detail::FaultEvaluator eval(g, domain, options.variant);
        std::vector<std::size_t> combo;
        for (;;) {
            const std::uint64_t b = next_block.fetch_add(1);
            if (b >= blocks)
                return;
            std::mt19937_64 rng(splitmix64(options.seed ^ splitmix64(b)));
            BlockResult& out = results[b];
            const std::uint64_t first = b * detail::kProbeBlock;
            const std::uint64_t last = std::min(options.trials, first + detail::kProbeBlock);
            for (std::uint64_t trial = first; trial < last; ++trial) {
                if (options.directed && trial == 0) {
                    combo = detail::directed_combination(g, domain, options.size);
                } else {
                    int attempts = 0;
                    do {
                        if (++attempts > detail::kMaxRejections) {
                            out.sampling_failed = true;
                            return;
                        }
                        detail::sample_combination(rng, domain.size(), options.size, combo);
                    } while (eval.dominated(combo));
                }
                if (eval.precludes(combo)) {
                    if (out.found++ == 0) {
                        out.first_trial = trial;
                        out.first_combo = combo;
                    }
                }
            }
        }
    };

    const unsigned threads = detail::resolve_threads(options.threads);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }

    detail::FaultEvaluator eval(g, domain, options.variant);
    for (const BlockResult& r : results) {
        if (r.sampling_failed)
            throw Error(ErrorKind::InvalidFault, "could not sample a non-dominated fault set of size "
                    + std::to_string(options.size));
        report.precluding_found += r.found;
        if (r.first_trial && !report.first_witness) {
            report.first_witness = eval.to_fault_set(r.first_combo);
            report.first_witness_trial = r.first_trial;
        }
    }
    return report;
}

inline nlohmann::json to_json(const FaultSet& f)
{
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge& e : f.edges)
        edges.push_back({e.u, e.v});
    return {{"vertices", f.vertices}, {"edges", edges}};
}

inline nlohmann::json to_json(const PreclusionReport& r, bool with_timing = true)
{
    nlohmann::json j;
    j["variant"] = to_string(r.variant);
    j["number"] = r.number;
    j["witness"] = to_json(r.witness);
    j["all_optimal_trivial"] = r.all_optimal_trivial ? nlohmann::json(*r.all_optimal_trivial) : nlohmann::json();
    j["optimal_count"] = r.optimal_count ? nlohmann::json(*r.optimal_count) : nlohmann::json();
    j["subsets_examined"] = r.subsets_examined;
    j["already_precluded"] = r.already_precluded;
    j["heuristic"] = r.heuristic;
    j["wall_time_ms"] = with_timing ? r.wall_time_ms : 0;
    return j;
}

inline nlohmann::json to_json(const ProbeReport& r)
{
    nlohmann::json j;
    j["variant"] = to_string(r.variant);
    j["size"] = r.size;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["directed"] = r.directed;
    j["precluding_found"] = r.precluding_found;
    j["first_witness"] = r.first_witness ? to_json(*r.first_witness) : nlohmann::json();
    j["first_witness_trial"] = r.first_witness_trial ? nlohmann::json(*r.first_witness_trial) : nlohmann::json();
    return j;
}

} // namespace fsmp
