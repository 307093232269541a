#pragma once

// Reference oracles for the test suites. Everything here is exponential and
// written independently of the library's search and matching code paths.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fsmp/generators.hpp"
#include "fsmp/graph.hpp"
#include "fsmp/matching.hpp"
#include "fsmp/preclusion.hpp"

namespace fsmp::oracle {

/// Maximum matching size by exhaustive branching on the smallest free vertex.
inline std::size_t brute_max_matching(const Graph& g)
{
    const std::size_t n = g.vertex_count();
    std::vector<char> used(n, 0);
    std::function<std::size_t(Vertex)> best = [&](Vertex from) -> std::size_t {
        while (from < n && used[from])
            ++from;
        if (from >= n)
            return 0;
        used[from] = 1;
        std::size_t result = best(from + 1); // leave `from` exposed
        for (Vertex w : g.neighbors(from)) {
            if (used[w])
                continue;
            used[w] = 1;
            result = std::max(result, 1 + best(from + 1));
            used[w] = 0;
        }
        used[from] = 0;
        return result;
    };
    return best(0);
}

inline bool brute_has_pm_or_apm(const Graph& g) { return 2 * brute_max_matching(g) + 1 >= g.vertex_count(); }

/// G minus the given vertices and edges, built without apply_faults.
inline Graph delete_elements(const Graph& g, const std::vector<Vertex>& vertices, const std::vector<Edge>& edges)
{
    std::vector<int> label(g.vertex_count(), -1);
    int next = 0;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (std::find(vertices.begin(), vertices.end(), v) == vertices.end())
            label[v] = next++;
    std::vector<std::pair<Vertex, Vertex>> kept;
    for (const Edge& e : g.edges()) {
        if (std::find(edges.begin(), edges.end(), e) != edges.end())
            continue;
        if (label[e.u] < 0 || label[e.v] < 0)
            continue;
        kept.emplace_back(static_cast<Vertex>(label[e.u]), static_cast<Vertex>(label[e.v]));
    }
    return build_graph(static_cast<std::size_t>(next), std::span<const std::pair<Vertex, Vertex>>(kept));
}

/// Isolated-vertex criterion with adjacency bitmasks: a fractional perfect
/// matching exists iff i(G-S) <= |S| for every vertex set S. At most 20 vertices.
inline bool brute_fpm_isolated(const Graph& g)
{
    const std::size_t n = g.vertex_count();
    std::vector<std::uint32_t> adj(n, 0);
    for (const Edge& e : g.edges()) {
        adj[e.u] |= std::uint32_t{1} << e.v;
        adj[e.v] |= std::uint32_t{1} << e.u;
    }
    for (std::uint32_t s = 0; s < (std::uint32_t{1} << n); ++s) {
        int isolated = 0;
        for (std::size_t v = 0; v < n; ++v)
            if (!(s >> v & 1u) && (adj[v] & ~s) == 0)
                ++isolated;
        if (isolated > __builtin_popcount(s))
            return false;
    }
    return true;
}

inline bool brute_survives(const Graph& g, Variant v)
{
    return is_fractional(v) ? fractional_pm_bruteforce(g) : brute_has_pm_or_apm(g);
}

/// Preclusion number by scanning every subset of the fault domain (dominated
/// ones included) in order of size. Domain must have at most 30 elements.
/// Returns -1 when nothing precludes, 0 when the graph already fails.
inline int brute_preclusion_number(const Graph& g, Variant variant)
{
    if (!brute_survives(g, variant))
        return 0;
    const bool with_vertices = allows_vertex_faults(variant);
    const std::size_t nv = with_vertices ? g.vertex_count() : 0;
    const std::size_t m = nv + g.edge_count();
    std::vector<std::vector<std::uint32_t>> by_size(m + 1);
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << m); ++mask)
        by_size[static_cast<std::size_t>(__builtin_popcount(mask))].push_back(mask);
    for (std::size_t k = 1; k <= m; ++k) {
        for (std::uint32_t mask : by_size[k]) {
            std::vector<Vertex> vs;
            std::vector<Edge> es;
            for (std::size_t i = 0; i < m; ++i) {
                if (!(mask >> i & 1u))
                    continue;
                if (i < nv)
                    vs.push_back(static_cast<Vertex>(i));
                else
                    es.push_back(g.edges()[i - nv]);
            }
            if (!brute_survives(delete_elements(g, vs, es), variant))
                return static_cast<int>(k);
        }
    }
    return -1;
}

inline double unit_interval(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Erdos-Renyi graph with edge probability p.
inline Graph random_graph(std::mt19937_64& rng, std::size_t n, double p)
{
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            if (unit_interval(rng) < p)
                pairs.emplace_back(a, b);
    return build_graph(n, std::span<const std::pair<Vertex, Vertex>>(pairs));
}

inline bool connected(const Graph& g)
{
    if (g.vertex_count() <= 1)
        return true;
    std::vector<char> seen(g.vertex_count(), 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (Vertex w : g.neighbors(v))
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    return count == g.vertex_count();
}

struct NamedGraph {
    std::string name;
    Graph graph;
};

/// Desk-scale corpus: the generator families plus seeded random connected graphs.
inline std::vector<NamedGraph> corpus()
{
    std::vector<NamedGraph> out;
    for (std::size_t k = 3; k <= 9; ++k)
        out.push_back({"cycle:" + std::to_string(k), generate("cycle:" + std::to_string(k))});
    for (std::size_t n = 3; n <= 7; ++n)
        out.push_back({"complete:" + std::to_string(n), generate("complete:" + std::to_string(n))});
    for (std::size_t k = 2; k <= 8; ++k)
        out.push_back({"path:" + std::to_string(k), generate("path:" + std::to_string(k))});
    for (const char* spec : {"torus:3,3", "torus:3,4", "torus:4,4", "cartesian(cycle:3,path:2)",
             "cartesian(path:2,path:2)", "cartesian(path:3,cycle:4)", "cartesian(complete:4,path:2)",
             "cartesian(cycle:5,path:2)"})
        out.push_back({spec, generate(spec)});
    std::mt19937_64 rng(20261015);
    int added = 0;
    while (added < 24) {
        const std::size_t n = 5 + static_cast<std::size_t>(rng() % 5);
        Graph g = random_graph(rng, n, 0.35 + 0.3 * unit_interval(rng));
        if (!connected(g) || min_degree(g) < 1)
            continue;
        out.push_back({"random-" + std::to_string(added++), std::move(g)});
    }
    return out;
}

} // namespace fsmp::oracle
