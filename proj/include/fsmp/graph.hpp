#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fsmp/error.hpp"

namespace fsmp {

using Vertex = std::uint32_t;

inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

/// Undirected edge stored canonically as (min, max).
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    constexpr Edge() = default;
    constexpr Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

    constexpr bool touches(Vertex x) const { return u == x || v == x; }
    constexpr Vertex other(Vertex x) const { return x == u ? v : u; }

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable finite simple undirected graph on the vertices 0..n-1.
///
/// Edges are kept sorted in canonical order and the adjacency is stored in
/// compressed form with every neighbour list sorted ascending.
class Graph {
public:
    Graph() : offsets_(1, 0) {}

    std::size_t vertex_count() const { return offsets_.size() - 1; }
    std::size_t edge_count() const { return edges_.size(); }
    bool empty() const { return vertex_count() == 0; }

    std::span<const Edge> edges() const { return edges_; }

    std::span<const Vertex> neighbors(Vertex v) const
    {
        return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }

    std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

    bool has_vertex(Vertex v) const { return v < vertex_count(); }

    bool has_edge(Edge e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

    /// Position of `e` in edges(), or edge_count() when absent.
    std::size_t edge_index(Edge e) const
    {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
        if (it == edges_.end() || *it != e)
            return edge_count();
        return static_cast<std::size_t>(it - edges_.begin());
    }

    friend bool operator==(const Graph& a, const Graph& b)
    {
        return a.vertex_count() == b.vertex_count() && a.edges_ == b.edges_;
    }

    /// Builds a graph from edges that are already canonical, sorted and unique.
    static Graph from_sorted_edges(std::size_t vertex_count, std::vector<Edge> edges)
    {
        Graph g;
        g.offsets_.assign(vertex_count + 1, 0);
        for (const Edge& e : edges) {
            ++g.offsets_[e.u + 1];
            ++g.offsets_[e.v + 1];
        }
        for (std::size_t i = 0; i < vertex_count; ++i)
            g.offsets_[i + 1] += g.offsets_[i];
        g.neighbors_.resize(2 * edges.size());
        std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
        // Sorted edge order yields sorted neighbour lists without a second pass.
        for (const Edge& e : edges) {
            g.neighbors_[fill[e.u]++] = e.v;
            g.neighbors_[fill[e.v]++] = e.u;
        }
        g.edges_ = std::move(edges);
        return g;
    }

private:
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> neighbors_;
};

/// Validates and canonicalises an edge list. Duplicate pairs collapse to one edge.
inline Graph build_graph(std::size_t vertex_count, std::span<const std::pair<Vertex, Vertex>> pairs)
{
    if (vertex_count >= kNoVertex)
        throw Error(ErrorKind::TooLarge, "vertex count " + std::to_string(vertex_count));
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (auto [a, b] : pairs) {
        if (a >= vertex_count || b >= vertex_count)
            throw Error(ErrorKind::InvalidVertex, "edge (" + std::to_string(a) + "," + std::to_string(b)
                    + ") has an endpoint outside 0.." + std::to_string(vertex_count) + "-1");
        if (a == b)
            throw Error(ErrorKind::InvalidEdge, "self-loop at vertex " + std::to_string(a));
        edges.emplace_back(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph::from_sorted_edges(vertex_count, std::move(edges));
}

inline Graph build_graph(std::size_t vertex_count, std::initializer_list<std::pair<Vertex, Vertex>> pairs)
{
    return build_graph(vertex_count, std::span<const std::pair<Vertex, Vertex>>(pairs.begin(), pairs.size()));
}

inline Graph build_graph(std::size_t vertex_count, std::span<const Edge> edges)
{
    std::vector<std::pair<Vertex, Vertex>> pairs;
    pairs.reserve(edges.size());
    for (const Edge& e : edges)
        pairs.emplace_back(e.u, e.v);
    return build_graph(vertex_count, std::span<const std::pair<Vertex, Vertex>>(pairs));
}

inline std::size_t min_degree(const Graph& g)
{
    if (g.empty())
        throw Error(ErrorKind::EmptyGraph, "minimum degree of a graph without vertices");
    std::size_t best = g.degree(0);
    for (Vertex v = 1; v < g.vertex_count(); ++v)
        best = std::min(best, g.degree(v));
    return best;
}

/// A vertex of minimum degree, the smallest such label.
inline Vertex min_degree_vertex(const Graph& g)
{
    const std::size_t d = min_degree(g);
    for (Vertex v = 0;; ++v)
        if (g.degree(v) == d)
            return v;
}

/// Number of vertices outside `removed` whose neighbours all lie inside `removed`.
inline std::size_t isolated_count(const Graph& g, std::span<const Vertex> removed)
{
    std::vector<char> in_set(g.vertex_count(), 0);
    for (Vertex v : removed) {
        if (!g.has_vertex(v))
            throw Error(ErrorKind::InvalidVertex, "vertex " + std::to_string(v) + " not in graph");
        in_set[v] = 1;
    }
    std::size_t count = 0;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (in_set[v])
            continue;
        auto nbrs = g.neighbors(v);
        if (std::all_of(nbrs.begin(), nbrs.end(), [&](Vertex w) { return in_set[w] != 0; }))
            ++count;
    }
    return count;
}

inline std::size_t isolated_count(const Graph& g, std::initializer_list<Vertex> removed)
{
    return isolated_count(g, std::span<const Vertex>(removed.begin(), removed.size()));
}

/// Mixed set of vertices and edges scheduled for deletion.
struct FaultSet {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;

    FaultSet() = default;
    FaultSet(std::vector<Vertex> vs, std::vector<Edge> es) : vertices(std::move(vs)), edges(std::move(es))
    {
        std::sort(vertices.begin(), vertices.end());
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }

    std::size_t size() const { return vertices.size() + edges.size(); }
    bool empty() const { return size() == 0; }

    /// Edges already removed by deleting one of their endpoints.
    std::vector<Edge> dominated_edges() const
    {
        std::vector<Edge> out;
        for (const Edge& e : edges)
            if (std::binary_search(vertices.begin(), vertices.end(), e.u)
                || std::binary_search(vertices.begin(), vertices.end(), e.v))
                out.push_back(e);
        return out;
    }

    bool dominated() const { return !dominated_edges().empty(); }

    friend bool operator==(const FaultSet&, const FaultSet&) = default;

    /// Canonical order: vertices first, then edges, each part ascending.
    friend auto operator<=>(const FaultSet& a, const FaultSet& b)
    {
        if (auto c = a.vertices <=> b.vertices; c != 0)
            return c;
        return a.edges <=> b.edges;
    }
};

/// Result of deleting a fault set: the survivor graph plus the relabel maps.
struct FaultedGraph {
    Graph graph;
    std::vector<Vertex> new_label;      ///< old id -> new id, kNoVertex if deleted
    std::vector<Vertex> original_label; ///< new id -> old id
};

inline void validate_faults(const Graph& g, const FaultSet& f)
{
    for (Vertex v : f.vertices)
        if (!g.has_vertex(v))
            throw Error(ErrorKind::InvalidFault, "fault vertex " + std::to_string(v) + " is not in the graph");
    for (const Edge& e : f.edges)
        if (!g.has_edge(e))
            throw Error(ErrorKind::InvalidFault,
                "fault edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") is not in the graph");
}

inline FaultedGraph apply_faults(const Graph& g, const FaultSet& f)
{
    validate_faults(g, f);
    FaultedGraph out;
    out.new_label.assign(g.vertex_count(), kNoVertex);
    std::size_t next_vertex = 0;
    auto deleted = f.vertices.begin();
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (deleted != f.vertices.end() && *deleted == v) {
            ++deleted;
            continue;
        }
        out.new_label[v] = static_cast<Vertex>(next_vertex++);
        out.original_label.push_back(v);
    }
    std::vector<Edge> kept;
    kept.reserve(g.edge_count());
    auto removed = f.edges.begin();
    for (const Edge& e : g.edges()) {
        while (removed != f.edges.end() && *removed < e)
            ++removed;
        if (removed != f.edges.end() && *removed == e)
            continue;
        Vertex a = out.new_label[e.u];
        Vertex b = out.new_label[e.v];
        if (a == kNoVertex || b == kNoVertex)
            continue;
        // Order-preserving relabel keeps the list sorted.
        kept.emplace_back(a, b);
    }
    out.graph = Graph::from_sorted_edges(next_vertex, std::move(kept));
    return out;
}

/// Reads the edge-list text format: "n m", then m lines "u v"; '#' starts a comment line.
inline Graph read_edge_list(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<std::pair<Vertex, Vertex>> pairs;
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream fields(line);
        long long a = 0;
        long long b = 0;
        if (!(fields >> a >> b) || a < 0 || b < 0)
            fail("expected two non-negative integers, got '" + line + "'");
        std::string rest;
        if (fields >> rest)
            fail("trailing token '" + rest + "'");
        if (!have_header) {
            n = static_cast<std::size_t>(a);
            m = static_cast<std::size_t>(b);
            have_header = true;
            pairs.reserve(m);
        } else {
            if (static_cast<unsigned long long>(a) >= n || static_cast<unsigned long long>(b) >= n)
                throw Error(ErrorKind::InvalidVertex, "line " + std::to_string(line_no) + ": endpoint out of range");
            pairs.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
        }
    }
    if (!have_header)
        throw Error(ErrorKind::ParseError, "missing 'n m' header");
    if (pairs.size() != m)
        throw Error(ErrorKind::ParseError,
            "header declares " + std::to_string(m) + " edges, found " + std::to_string(pairs.size()));
    return build_graph(n, std::span<const std::pair<Vertex, Vertex>>(pairs));
}

inline Graph load_edge_list(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Graph& g)
{
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges())
        out << e.u << ' ' << e.v << '\n';
}

} // namespace fsmp
