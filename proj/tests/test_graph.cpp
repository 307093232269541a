#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fsmp/generators.hpp"
#include "fsmp/graph.hpp"
#include "oracles.hpp"

using namespace fsmp;

namespace {

Graph c4() { return build_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}); }
Graph c5() { return build_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}); }

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no exception";
    return ErrorKind::ParseError;
}

} // namespace

TEST(BuildGraph, SmallestMatchedGraph)
{
    Graph k2 = build_graph(2, {{0, 1}});
    EXPECT_EQ(k2.vertex_count(), 2u);
    EXPECT_EQ(k2.edge_count(), 1u);
}

TEST(BuildGraph, CycleIsTwoRegular)
{
    Graph g = c5();
    EXPECT_EQ(g.edge_count(), 5u);
    for (Vertex v = 0; v < 5; ++v)
        EXPECT_EQ(g.degree(v), 2u);
}

TEST(BuildGraph, DuplicatesCollapse)
{
    Graph g = build_graph(3, {{0, 1}, {0, 1}, {1, 2}});
    EXPECT_EQ(g.vertex_count(), 3u);
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(build_graph(3, {{1, 0}, {0, 1}}).edge_count(), 1u);
}

TEST(BuildGraph, Errors)
{
    EXPECT_EQ(kind_of([] { build_graph(3, {{0, 3}}); }), ErrorKind::InvalidVertex);
    EXPECT_EQ(kind_of([] { build_graph(3, {{1, 1}}); }), ErrorKind::InvalidEdge);
}

TEST(BuildGraph, AdjacencyMatchesEdgesAndIsSorted)
{
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        Graph g = oracle::random_graph(rng, 1 + rng() % 15, 0.4);
        std::size_t degree_sum = 0;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            auto nbrs = g.neighbors(v);
            EXPECT_TRUE(std::is_sorted(nbrs.begin(), nbrs.end()));
            EXPECT_EQ(nbrs.size(), g.degree(v));
            for (Vertex w : nbrs) {
                EXPECT_NE(v, w);
                EXPECT_TRUE(g.has_edge(Edge(v, w)));
            }
            degree_sum += g.degree(v);
        }
        EXPECT_EQ(degree_sum, 2 * g.edge_count()); // handshake
    }
}

TEST(ApplyFaults, IsolatesVertexOfC4)
{
    FaultedGraph f = apply_faults(c4(), FaultSet({}, {Edge(0, 1), Edge(0, 3)}));
    EXPECT_EQ(f.graph.vertex_count(), 4u);
    EXPECT_EQ(f.graph.edge_count(), 2u);
    EXPECT_EQ(f.graph.degree(0), 0u);
}

TEST(ApplyFaults, C5MinusVertexIsPath)
{
    FaultedGraph f = apply_faults(c5(), FaultSet({0}, {}));
    EXPECT_EQ(f.graph, generate("path:4"));
    EXPECT_EQ(f.new_label[0], kNoVertex);
    EXPECT_EQ(f.original_label, (std::vector<Vertex>{1, 2, 3, 4}));
}

TEST(ApplyFaults, CompleteMinusVertexAndEdge)
{
    // C(4,2) - 1 = 5 edges remain.
    FaultedGraph f = apply_faults(generate("complete:5"), FaultSet({0}, {Edge(1, 2)}));
    EXPECT_EQ(f.graph.vertex_count(), 4u);
    EXPECT_EQ(f.graph.edge_count(), 5u);
}

TEST(ApplyFaults, RejectsForeignElements)
{
    EXPECT_EQ(kind_of([] { apply_faults(c4(), FaultSet({}, {Edge(0, 2)})); }), ErrorKind::InvalidFault);
    EXPECT_EQ(kind_of([] { apply_faults(c4(), FaultSet({9}, {})); }), ErrorKind::InvalidFault);
}

TEST(ApplyFaults, Properties)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        Graph g = oracle::random_graph(rng, 2 + rng() % 12, 0.5);
        std::vector<Vertex> vs;
        std::vector<Edge> es;
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            if (rng() % 4 == 0)
                vs.push_back(v);
        for (const Edge& e : g.edges())
            if (rng() % 3 == 0)
                es.push_back(e);
        FaultSet f(vs, es);
        Graph before = g;
        FaultedGraph out = apply_faults(g, f);
        EXPECT_EQ(out.graph.vertex_count(), g.vertex_count() - f.vertices.size());
        EXPECT_EQ(g, before);
        EXPECT_EQ(out.graph, oracle::delete_elements(g, f.vertices, f.edges));
        for (const Edge& e : out.graph.edges()) {
            Edge original(out.original_label[e.u], out.original_label[e.v]);
            EXPECT_TRUE(g.has_edge(original));
            EXPECT_FALSE(std::binary_search(f.edges.begin(), f.edges.end(), original));
        }

        EXPECT_EQ(apply_faults(g, FaultSet{}).graph, g);
    }
}

TEST(FaultSet, CanonicalAndDominated)
{
    FaultSet f({3, 1, 3}, {Edge(2, 1), Edge(4, 5)});
    EXPECT_EQ(f.vertices, (std::vector<Vertex>{1, 3}));
    EXPECT_EQ(f.size(), 4u);
    EXPECT_TRUE(f.dominated());
    EXPECT_EQ(f.dominated_edges(), (std::vector<Edge>{Edge(1, 2)}));
    EXPECT_FALSE(FaultSet({0}, {Edge(1, 2)}).dominated());
}

TEST(IsolatedCount, Examples)
{
    EXPECT_EQ(isolated_count(generate("path:3"), {1}), 2u);
    EXPECT_EQ(isolated_count(c5(), {}), 0u);
    EXPECT_EQ(isolated_count(generate("complete:4"), {0, 1}), 0u);
    EXPECT_EQ(kind_of([] { isolated_count(c5(), {5}); }), ErrorKind::InvalidVertex);
}

TEST(IsolatedCount, EmptySetCountsDegreeZero)
{
    Graph g = build_graph(6, {{0, 1}, {2, 3}});
    EXPECT_EQ(isolated_count(g, {}), 2u);
}

TEST(MinDegree, Examples)
{
    EXPECT_EQ(min_degree(generate("cycle:7")), 2u);
    EXPECT_EQ(min_degree(generate("complete:6")), 5u);
    EXPECT_EQ(min_degree(generate("torus:5,5")), 4u);
    EXPECT_EQ(kind_of([] { min_degree(Graph{}); }), ErrorKind::EmptyGraph);
}

TEST(EdgeList, ReadWithComments)
{
    std::istringstream in("# triangle\n3 3\n0 1\n1 2\n# closing edge\n2 0\n");
    Graph g = read_edge_list(in);
    EXPECT_EQ(g, generate("cycle:3"));
}

TEST(EdgeList, WriteThenRead)
{
    Graph g = generate("torus:3,4");
    std::stringstream buf;
    write_edge_list(buf, g);
    EXPECT_EQ(read_edge_list(buf), g);
}

TEST(EdgeList, Errors)
{
    auto parse = [](const char* text) {
        std::istringstream in(text);
        read_edge_list(in);
    };
    EXPECT_EQ(kind_of([&] { parse("3 2\n0 1\n"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { parse("3 1\n0 x\n"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { parse("3 1\n0 3\n"); }), ErrorKind::InvalidVertex);
    EXPECT_EQ(kind_of([&] { parse("3 1\n1 1\n"); }), ErrorKind::InvalidEdge);
    EXPECT_EQ(kind_of([&] { parse(""); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { load_edge_list("/nonexistent/graph.txt"); }), ErrorKind::IoError);
}
