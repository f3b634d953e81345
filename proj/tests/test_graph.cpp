#include <gtest/gtest.h>

#include "expminor/graph.hpp"
#include "expminor/rng.hpp"
#include "oracles.hpp"

using namespace expminor;

TEST(GraphCore, ParseTriangle) {
  auto g = parse_graph("3 3\n0 1\n1 2\n0 2\n");
  EXPECT_EQ(g.n(), 3);
  EXPECT_EQ(g.m(), 3);
  EXPECT_EQ(g.size(), 6);
  for (int v = 0; v < 3; ++v) EXPECT_EQ(g.degree(v), 2);
}

TEST(GraphCore, ParseRejectsSelfLoop) {
  EXPECT_THROW(parse_graph("2 1\n0 0\n"), GraphFormatError);
}

TEST(GraphCore, ParseK4AllPairs) {
  auto g = parse_graph("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
  EXPECT_EQ(g.m(), 6);
  EXPECT_EQ(g, oracle::k(4));
}

TEST(GraphCore, ParseErrors) {
  EXPECT_THROW(parse_graph("3 2\n0 1\n0 1\n"), GraphFormatError);   // duplicate
  EXPECT_THROW(parse_graph("3 2\n0 1\n1 0\n"), GraphFormatError);   // duplicate reversed
  EXPECT_THROW(parse_graph("3 1\n0 3\n"), GraphFormatError);        // out of range
  EXPECT_THROW(parse_graph("3 1\n0 x\n"), GraphFormatError);        // malformed
  EXPECT_THROW(parse_graph("3 2\n0 1\n"), GraphFormatError);        // count mismatch
  EXPECT_THROW(parse_graph("3 1\n0 1 2\n"), GraphFormatError);      // trailing token
  EXPECT_THROW(parse_graph(""), GraphFormatError);                  // no header
}

TEST(GraphCore, CommentsAndRoundTrip) {
  auto g = parse_graph("# host\n4 3\n# edges\n2 3\n0 1\n1 2\n");
  auto text = format_graph(g);
  EXPECT_EQ(text, "4 3\n0 1\n1 2\n2 3\n");
  EXPECT_EQ(format_graph(parse_graph(text)), text);
}

TEST(GraphCore, SaveLoadRoundTrip) {
  auto g = oracle::petersen();
  auto path = ::testing::TempDir() + "/petersen.txt";
  save_graph(g, path);
  EXPECT_EQ(load_graph(path), g);
  EXPECT_THROW(load_graph(::testing::TempDir() + "/does/not/exist.txt"), Error);
}

TEST(GraphCore, AdjacencySortedAndSymmetric) {
  Rng rng(1);
  auto g = oracle::random_connected(30, 40, rng);
  for (int u = 0; u < g.n(); ++u) {
    auto nb = g.neighbors(u);
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    for (std::size_t i = 0; i < nb.size(); ++i) {
      EXPECT_TRUE(g.has_edge(nb[i], u));
      EXPECT_EQ(g.edge(g.incident_edges(u)[i]),
                (Edge{std::min(u, nb[i]), std::max(u, nb[i])}));
    }
  }
}

TEST(GraphCore, InducedSubgraphExamples) {
  auto k3 = induced_subgraph(oracle::k(4), VertexSet{0, 1, 2});
  EXPECT_EQ(k3.graph, oracle::k(3));
  auto p3 = induced_subgraph(oracle::cycle(6), VertexSet{0, 1, 2});
  EXPECT_EQ(p3.graph.n(), 3);
  EXPECT_EQ(p3.graph.m(), 2);
  auto g = oracle::petersen();
  EXPECT_EQ(induced_subgraph(g, all_vertices(g.n())).graph, g);
  EXPECT_THROW(induced_subgraph(g, VertexSet{0, 10}), PreconditionError);
}

TEST(GraphCore, InducedSubgraphMaps) {
  auto g = oracle::cycle(6);
  auto sub = induced_subgraph(g, VertexSet{1, 3, 4});
  EXPECT_EQ(sub.to_parent, (std::vector<Vertex>{1, 3, 4}));
  EXPECT_EQ(sub.from_parent[3], 1);
  EXPECT_EQ(sub.from_parent[0], -1);
  EXPECT_EQ(sub.graph.m(), 1);
  EXPECT_EQ(sub.lift(VertexSet{0, 2}), (VertexSet{1, 4}));
}

TEST(GraphCore, CutOfExamples) {
  auto k4 = oracle::k(4);
  EXPECT_EQ(cut_of(k4, VertexSet{0}).sparsity, Rational(3));
  auto c = cut_of(k4, VertexSet{0, 1});
  EXPECT_EQ(c.crossing_edges.size(), 4u);
  EXPECT_EQ(c.sparsity, Rational(2));
  auto arc = cut_of(oracle::cycle(6), VertexSet{0, 1, 2});
  EXPECT_EQ(arc.crossing_edges.size(), 2u);
  EXPECT_EQ(arc.sparsity, Rational(2, 3));
  EXPECT_THROW(cut_of(k4, VertexSet{}), PreconditionError);
  EXPECT_THROW(cut_of(k4, VertexSet{0, 1, 2, 3}), PreconditionError);
}

TEST(GraphCore, CutSymmetryAndCrossingRecount) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = oracle::random_connected(12, 10, rng);
    VertexSet a;
    for (int v = 0; v < g.n(); ++v) {
      if (rng.below(2)) a.push_back(v);
    }
    if (a.empty() || static_cast<int>(a.size()) == g.n()) continue;
    auto c = cut_of(g, a);
    auto c2 = cut_of(g, complement(g.n(), a));
    EXPECT_EQ(c.sparsity, c2.sparsity);
    EXPECT_EQ(c.sparsity, oracle::sparsity_of(g, a));
    std::uint64_t mask = 0;
    for (auto v : a) mask |= 1ULL << v;
    EXPECT_EQ(static_cast<int>(c.crossing_edges.size()), oracle::crossing(g, mask));
  }
}

TEST(GraphCore, GreedyMatchingExamples) {
  auto m = greedy_matching_across(oracle::k(4), VertexSet{0, 1}, VertexSet{2, 3});
  EXPECT_EQ(m.size(), 2u);
  auto c6 = greedy_matching_across(oracle::cycle(6), VertexSet{0, 2, 4}, VertexSet{1, 3, 5});
  EXPECT_EQ(c6.size(), 3u);
  auto none = greedy_matching_across(oracle::make(4, {{0, 1}, {2, 3}}), VertexSet{0, 1}, VertexSet{2, 3});
  EXPECT_EQ(none.size(), 0u);
}

TEST(GraphCore, GreedyMatchingIsMaximal) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = oracle::random_connected(20, 25, rng);
    VertexSet a, b;
    for (int v = 0; v < g.n(); ++v) (rng.below(2) ? a : b).push_back(v);
    auto m = greedy_matching_across(g, a, b);
    std::vector<int> used(g.n(), 0);
    auto in_a = membership(g.n(), a);
    for (auto [u, v] : m.pairs) {
      ASSERT_TRUE(g.has_edge(u, v));
      ASSERT_TRUE(in_a[u] != in_a[v]);
      ++used[u];
      ++used[v];
    }
    int cross = 0;
    for (auto [u, v] : g.edges()) {
      if (in_a[u] == in_a[v]) continue;
      ++cross;
      ASSERT_TRUE(used[u] || used[v]) << "crossing edge with two free endpoints";
    }
    for (int v = 0; v < g.n(); ++v) ASSERT_LE(used[v], 1);
    int d = g.max_degree();
    EXPECT_GE(static_cast<int>(m.size()) * (2 * d - 1), cross);
  }
}

TEST(GraphCore, Components) {
  auto g = oracle::make(6, {{0, 1}, {2, 3}, {3, 4}});
  auto comps = connected_components(g);
  ASSERT_EQ(comps.size(), 3u);
  EXPECT_EQ(comps[0], (VertexSet{0, 1}));
  EXPECT_EQ(comps[1], (VertexSet{2, 3, 4}));
  EXPECT_EQ(comps[2], (VertexSet{5}));
  EXPECT_FALSE(is_connected(g));
  EXPECT_TRUE(is_connected_subset(g, VertexSet{2, 3, 4}));
  EXPECT_FALSE(is_connected_subset(g, VertexSet{2, 4}));
  EXPECT_FALSE(is_connected_subset(g, VertexSet{}));
  EXPECT_EQ(components_within(g, VertexSet{0, 2, 4}).size(), 3u);
}

TEST(GraphCore, WithoutEdges) {
  auto g = without_edges(oracle::cycle(5), std::vector<Edge>{{0, 1}});
  EXPECT_EQ(g.m(), 4);
  EXPECT_FALSE(g.has_edge(0, 1));
}
