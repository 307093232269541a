#pragma once

#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsmp/error.hpp"
#include "fsmp/graph.hpp"

namespace fsmp {

struct MatchingResult {
    std::size_t size = 0;
    std::vector<Edge> matched_pairs;
    bool covers_all = false;
    bool covers_all_but_one = false;
};

namespace detail {

/// Edmonds' blossom-contraction algorithm for maximum cardinality matching.
///
/// Scratch space lives in the object, one per call site. `mate[v]` is the
/// partner of v or kNoVertex.
class BlossomMatcher {
public:
    explicit BlossomMatcher(const Graph& g)
        : g_(g), n_(g.vertex_count()), mate_(n_, kNoVertex), parent_(n_), base_(n_), in_queue_(n_),
          in_blossom_(n_), on_path_(n_)
    {
        queue_.reserve(n_);
    }

    /// Runs to completion, or stops early once more than `max_exposed`
    /// vertices are certain to stay unmatched. Returns the number of
    /// vertices left exposed (exact when the run completes).
    std::size_t run(std::size_t max_exposed = static_cast<std::size_t>(-1))
    {
        greedy_start();
        std::size_t exposed = 0;
        for (Vertex root = 0; root < n_; ++root) {
            if (mate_[root] != kNoVertex)
                continue;
            Vertex end = find_augmenting_path(root);
            if (end == kNoVertex) {
                // A vertex with no augmenting path now never gains one later.
                if (++exposed > max_exposed)
                    return exposed;
                continue;
            }
            augment(end);
        }
        return exposed;
    }

    const std::vector<Vertex>& mates() const { return mate_; }

private:
    void greedy_start()
    {
        for (Vertex v = 0; v < n_; ++v) {
            if (mate_[v] != kNoVertex)
                continue;
            for (Vertex w : g_.neighbors(v)) {
                if (mate_[w] == kNoVertex) {
                    mate_[v] = w;
                    mate_[w] = v;
                    break;
                }
            }
        }
    }

    Vertex lowest_common_ancestor(Vertex a, Vertex b)
    {
        std::fill(on_path_.begin(), on_path_.end(), 0);
        for (;;) {
            a = base_[a];
            on_path_[a] = 1;
            if (mate_[a] == kNoVertex)
                break;
            a = parent_[mate_[a]];
        }
        for (;;) {
            b = base_[b];
            if (on_path_[b])
                return b;
            b = parent_[mate_[b]];
        }
    }

    void mark_path(Vertex v, Vertex blossom_base, Vertex child)
    {
        while (base_[v] != blossom_base) {
            in_blossom_[base_[v]] = 1;
            in_blossom_[base_[mate_[v]]] = 1;
            parent_[v] = child;
            child = mate_[v];
            v = parent_[mate_[v]];
        }
    }

    Vertex find_augmenting_path(Vertex root)
    {
        std::fill(in_queue_.begin(), in_queue_.end(), 0);
        std::fill(parent_.begin(), parent_.end(), kNoVertex);
        for (Vertex i = 0; i < n_; ++i)
            base_[i] = i;
        queue_.clear();
        in_queue_[root] = 1;
        queue_.push_back(root);
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            Vertex v = queue_[head];
            for (Vertex to : g_.neighbors(v)) {
                if (base_[v] == base_[to] || mate_[v] == to)
                    continue;
                if (to == root || (mate_[to] != kNoVertex && parent_[mate_[to]] != kNoVertex)) {
                    Vertex cur = lowest_common_ancestor(v, to);
                    std::fill(in_blossom_.begin(), in_blossom_.end(), 0);
                    mark_path(v, cur, to);
                    mark_path(to, cur, v);
                    for (Vertex i = 0; i < n_; ++i) {
                        if (in_blossom_[base_[i]]) {
                            base_[i] = cur;
                            if (!in_queue_[i]) {
                                in_queue_[i] = 1;
                                queue_.push_back(i);
                            }
                        }
                    }
                } else if (parent_[to] == kNoVertex) {
                    parent_[to] = v;
                    if (mate_[to] == kNoVertex)
                        return to;
                    Vertex next = mate_[to];
                    in_queue_[next] = 1;
                    queue_.push_back(next);
                }
            }
        }
        return kNoVertex;
    }

    void augment(Vertex v)
    {
        while (v != kNoVertex) {
            Vertex pv = parent_[v];
            Vertex ppv = mate_[pv];
            mate_[v] = pv;
            mate_[pv] = v;
            v = ppv;
        }
    }

    const Graph& g_;
    std::size_t n_;
    std::vector<Vertex> mate_;
    std::vector<Vertex> parent_;
    std::vector<Vertex> base_;
    std::vector<char> in_queue_;
    std::vector<char> in_blossom_;
    std::vector<char> on_path_;
    std::vector<Vertex> queue_;
};

/// Bipartite double cover: u' = u, u'' = n + u, with edges u'v'' and v'u'' per uv.
inline Graph double_cover(const Graph& g)
{
    const auto n = static_cast<Vertex>(g.vertex_count());
    std::vector<Edge> edges;
    edges.reserve(2 * g.edge_count());
    for (const Edge& e : g.edges()) {
        edges.emplace_back(e.u, n + e.v);
        edges.emplace_back(e.v, n + e.u);
    }
    std::sort(edges.begin(), edges.end());
    return Graph::from_sorted_edges(2 * g.vertex_count(), std::move(edges));
}

} // namespace detail

inline constexpr std::size_t kMaxMatchingVertices = 2000;

inline MatchingResult max_matching(const Graph& g)
{
    if (g.vertex_count() > kMaxMatchingVertices)
        throw Error(ErrorKind::TooLarge, "maximum matching is capped at " + std::to_string(kMaxMatchingVertices)
                + " vertices");
    detail::BlossomMatcher matcher(g);
    matcher.run();
    MatchingResult out;
    const auto& mate = matcher.mates();
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (mate[v] != kNoVertex && v < mate[v])
            out.matched_pairs.emplace_back(v, mate[v]);
    out.size = out.matched_pairs.size();
    const std::size_t n = g.vertex_count();
    out.covers_all = 2 * out.size == n;
    out.covers_all_but_one = n % 2 == 1 && 2 * out.size + 1 == n;
    return out;
}

/// True iff the graph has a perfect or an almost-perfect matching.
inline bool has_pm_or_apm(const Graph& g)
{
    if (g.vertex_count() > 2 * kMaxMatchingVertices)
        throw Error(ErrorKind::TooLarge, "graph too large for the matching oracle");
    detail::BlossomMatcher matcher(g);
    return matcher.run(g.vertex_count() % 2) <= g.vertex_count() % 2;
}

/// Edge weight in {0, 1/2, 1}, stored as twice its value.
struct HalfWeight {
    std::uint8_t twice = 0;

    friend bool operator==(HalfWeight, HalfWeight) = default;
};

inline std::string to_string(HalfWeight w)
{
    switch (w.twice) {
    case 0: return "0";
    case 1: return "1/2";
    case 2: return "1";
    }
    return "invalid";
}

/// Half-integral edge weighting, one entry per edge in canonical order.
struct FractionalMatching {
    std::vector<Edge> edges;
    std::vector<HalfWeight> weights;

    HalfWeight weight(Edge e) const
    {
        auto it = std::lower_bound(edges.begin(), edges.end(), e);
        if (it == edges.end() || *it != e)
            return {};
        return weights[static_cast<std::size_t>(it - edges.begin())];
    }
};

/// Checks every fractional-perfect-matching invariant with integer arithmetic.
/// Returns a description of the first violation, or nothing when valid.
inline std::optional<std::string> check_fractional_perfect_matching(const Graph& g, const FractionalMatching& f)
{
    if (f.edges.size() != f.weights.size())
        return "edge and weight lists differ in length";
    if (!std::equal(f.edges.begin(), f.edges.end(), g.edges().begin(), g.edges().end()))
        return "witness edges do not match the graph";
    const std::size_t n = g.vertex_count();
    std::vector<unsigned> twice_sum(n, 0);
    std::vector<std::vector<Vertex>> half_adj(n);
    unsigned long long total_twice = 0;
    for (std::size_t i = 0; i < f.edges.size(); ++i) {
        const auto w = f.weights[i].twice;
        if (w > 2)
            return "weight outside {0, 1/2, 1}";
        const Edge e = f.edges[i];
        twice_sum[e.u] += w;
        twice_sum[e.v] += w;
        total_twice += w;
        if (w == 1) {
            half_adj[e.u].push_back(e.v);
            half_adj[e.v].push_back(e.u);
        }
    }
    for (Vertex v = 0; v < n; ++v)
        if (twice_sum[v] != 2)
            return "vertex " + std::to_string(v) + " has incident weight " + std::to_string(twice_sum[v]) + "/2";
    if (total_twice != n)
        return "total weight " + std::to_string(total_twice) + "/2 differs from |V|/2";
    std::vector<char> seen(n, 0);
    for (Vertex start = 0; start < n; ++start) {
        if (seen[start] || half_adj[start].empty())
            continue;
        std::size_t length = 0;
        std::vector<Vertex> stack{start};
        seen[start] = 1;
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            ++length;
            if (half_adj[v].size() != 2)
                return "half-weight edges at vertex " + std::to_string(v) + " do not form a cycle";
            for (Vertex w : half_adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        if (length % 2 == 0)
            return "half-weight cycle through vertex " + std::to_string(start) + " has even length";
    }
    return std::nullopt;
}

/// Decides fractional perfect matching existence through a maximum matching
/// of the bipartite double cover, returning a half-integral witness.
inline std::optional<FractionalMatching> fractional_pm(const Graph& g)
{
    const std::size_t n = g.vertex_count();
    if (n > kMaxMatchingVertices)
        throw Error(ErrorKind::TooLarge, "fractional matching oracle is capped at "
                + std::to_string(kMaxMatchingVertices) + " vertices");
    Graph cover = detail::double_cover(g);
    detail::BlossomMatcher matcher(cover);
    if (matcher.run(0) != 0)
        return std::nullopt;
    const auto& mate = matcher.mates();
    FractionalMatching f;
    f.edges.assign(g.edges().begin(), g.edges().end());
    f.weights.resize(f.edges.size());
    for (std::size_t i = 0; i < f.edges.size(); ++i) {
        const Edge e = f.edges[i];
        std::uint8_t twice = 0;
        if (mate[e.u] == n + e.v)
            ++twice;
        if (mate[e.v] == n + e.u)
            ++twice;
        f.weights[i].twice = twice;
    }
    // Half edges form disjoint cycles; rewrite even ones as alternating 1/0.
    std::vector<std::vector<std::size_t>> half_edges(n);
    for (std::size_t i = 0; i < f.edges.size(); ++i)
        if (f.weights[i].twice == 1) {
            half_edges[f.edges[i].u].push_back(i);
            half_edges[f.edges[i].v].push_back(i);
        }
    std::vector<char> visited(n, 0);
    for (Vertex start = 0; start < n; ++start) {
        if (visited[start] || half_edges[start].size() != 2)
            continue;
        std::vector<std::size_t> cycle;
        Vertex v = start;
        std::size_t came_from = f.edges.size();
        do {
            visited[v] = 1;
            std::size_t next = half_edges[v][0] == came_from ? half_edges[v][1] : half_edges[v][0];
            cycle.push_back(next);
            v = f.edges[next].other(v);
            came_from = next;
        } while (v != start);
        if (cycle.size() % 2 == 0)
            for (std::size_t j = 0; j < cycle.size(); ++j)
                f.weights[cycle[j]].twice = j % 2 == 0 ? 2 : 0;
    }
    return f;
}

/// Decision only; skips witness construction.
inline bool has_fractional_pm(const Graph& g)
{
    if (g.vertex_count() > kMaxMatchingVertices)
        throw Error(ErrorKind::TooLarge, "fractional matching oracle is capped at "
                + std::to_string(kMaxMatchingVertices) + " vertices");
    Graph cover = detail::double_cover(g);
    detail::BlossomMatcher matcher(cover);
    return matcher.run(0) == 0;
}

inline constexpr std::size_t kBruteForceCap = 22;

/// Exponential reference oracle: checks i(G - S) <= |S| for every vertex subset S.
inline bool fractional_pm_bruteforce(const Graph& g, std::size_t cap = kBruteForceCap)
{
    const std::size_t n = g.vertex_count();
    if (n > cap || n > 30)
        throw Error(ErrorKind::TooLarge, "brute-force oracle limited to " + std::to_string(std::min<std::size_t>(cap, 30))
                + " vertices, got " + std::to_string(n));
    std::vector<std::uint32_t> adj(n, 0);
    for (const Edge& e : g.edges()) {
        adj[e.u] |= std::uint32_t{1} << e.v;
        adj[e.v] |= std::uint32_t{1} << e.u;
    }
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t subset = 0; subset < limit; ++subset) {
        const auto s = static_cast<std::uint32_t>(subset);
        const auto removed = static_cast<std::size_t>(__builtin_popcount(s));
        std::size_t isolated = 0;
        for (std::size_t v = 0; v < n; ++v)
            if (!(s >> v & 1u) && (adj[v] & ~s) == 0)
                ++isolated;
        if (isolated > removed)
            return false;
    }
    return true;
}

inline nlohmann::json to_json(const FractionalMatching& f)
{
    nlohmann::json edges = nlohmann::json::array();
    for (std::size_t i = 0; i < f.edges.size(); ++i)
        edges.push_back({f.edges[i].u, f.edges[i].v, to_string(f.weights[i])});
    return {{"edges", edges}};
}

} // namespace fsmp
