#include <gtest/gtest.h>

#include <cmath>

#include "expminor/flow_routing.hpp"
#include "expminor/generators.hpp"
#include "expminor/spectral.hpp"
#include "oracles.hpp"

using namespace expminor;

namespace {

Rational half_lambda2(const Graph& g) {
  return Rational::floor_of(lambda2(g).lambda2 / 2, 1000000);
}

void expect_flow_postconditions(const Graph& g, const RoutingParams& p, const McfResult& r,
                                double eps) {
  ASSERT_EQ(r.kind, McfResult::Kind::Flow);
  auto c = check_flow(g, r.flow);
  EXPECT_TRUE(c.paths_valid);
  EXPECT_LE(c.max_edge_congestion, 1 + eps);
  EXPECT_GE(c.min_pair_flow, (1 - eps) * p.W_star * (1 - 1e-9));
  EXPECT_LE(static_cast<std::int64_t>(c.max_hops), p.L);
}

}  // namespace

TEST(RoutingParams, Formulas) {
  auto p = RoutingParams::make(8, 3, Rational(1, 2));
  EXPECT_EQ(p.L, 1152);
  EXPECT_DOUBLE_EQ(p.W_star, 1.0 / 3072);
  EXPECT_EQ(p.eta, 2304);
  EXPECT_EQ(p.hop_cap(), 7);
  auto q = RoutingParams::make(2, 1, Rational(1, 2));
  EXPECT_DOUBLE_EQ(q.W_star, 1.0 / 256);
  EXPECT_THROW(RoutingParams::make(8, 3, Rational(0)), PreconditionError);
}

TEST(HopBounded, MatchesBellmanFord) {
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    int n = 2 + static_cast<int>(rng.below(14));
    auto g = oracle::random_connected(n, static_cast<int>(rng.below(2 * n)), rng);
    std::vector<double> len(g.m());
    for (auto& x : len) x = rng.uniform();
    int hops = 1 + static_cast<int>(rng.below(n));
    Vertex src = static_cast<Vertex>(rng.below(n));
    Vertex srcs[] = {src};
    HopBoundedPaths sp(g, len, srcs, hops);
    for (int v = 0; v < n; ++v) {
      double expect = oracle::hop_distance(g, len, src, v, hops);
      if (std::isinf(expect)) {
        EXPECT_TRUE(std::isinf(sp.dist(v)));
        continue;
      }
      EXPECT_NEAR(sp.dist(v), expect, 1e-9);
      auto p = sp.path_to(v);
      ASSERT_EQ(p.front(), src);
      ASSERT_EQ(p.back(), v);
      ASSERT_LE(static_cast<int>(p.size()) - 1, hops);
      double sum = 0;
      for (std::size_t i = 0; i + 1 < p.size(); ++i) sum += len[*g.edge_id(p[i], p[i + 1])];
      EXPECT_NEAR(sum, expect, 1e-9);
    }
  }
}

TEST(HopBounded, HopLimitBindsOnPath) {
  auto g = oracle::path(5);
  std::vector<double> len(4, 1.0);
  Vertex s[] = {0};
  HopBoundedPaths sp(g, len, s, 2);
  EXPECT_DOUBLE_EQ(sp.dist(2), 2.0);
  EXPECT_TRUE(std::isinf(sp.dist(3)));
}

TEST(Mcf, K4IsFlow) {
  auto g = oracle::k(4);
  auto p = RoutingParams::for_graph(g, Rational(1));
  EXPECT_LE(p.W_star, 1.0 / 512);
  auto r = solve_uniform_mcf(g, p);
  expect_flow_postconditions(g, p, r, 0.1);
}

TEST(Mcf, SingleEdgeIsFlow) {
  auto g = oracle::path(2);
  auto p = RoutingParams::for_graph(g, Rational(1, 2));
  auto r = solve_uniform_mcf(g, p);
  expect_flow_postconditions(g, p, r, 0.1);
  EXPECT_DOUBLE_EQ(r.flow.per_pair_demand, 1.0 / 256);
  ASSERT_EQ(r.flow.paths(0, 1).size(), 1u);
  EXPECT_EQ(r.flow.paths(0, 1)[0].path, (Path{0, 1}));
}

TEST(Mcf, TwoTrianglesAlphaOneIsFlow) {
  // The demand alpha / (64 n log n) is far below the bridge capacity 1/9.
  auto g = oracle::two_triangles_bridge();
  auto p = RoutingParams::for_graph(g, Rational(1));
  auto r = solve_uniform_mcf(g, p);
  expect_flow_postconditions(g, p, r, 0.1);
}

TEST(Mcf, TwoTrianglesLargeAlphaIsDual) {
  // W* = 200 / (64 * 6 * log2 6) > 1/9, the max concurrent flow.
  auto g = oracle::two_triangles_bridge();
  auto p = RoutingParams::for_graph(g, Rational(200));
  EXPECT_EQ(p.L, 3);
  auto r = solve_uniform_mcf(g, p);
  ASSERT_EQ(r.kind, McfResult::Kind::Dual);
  EXPECT_LT(r.dual.total_weight(), p.W_star);
  EXPECT_GE(pairwise_distance_sum(g, r.dual.lengths, p.hop_cap()), 1 - 0.1);
}

TEST(Mcf, PhaseCapRaises) {
  auto g = oracle::two_triangles_bridge();
  auto p = RoutingParams::for_graph(g, Rational(200));
  McfOptions o;
  o.max_phases = 1;
  EXPECT_THROW(solve_uniform_mcf(g, p, o), ConvergenceError);
}

TEST(Mcf, Preconditions) {
  auto p = RoutingParams::make(4, 1, Rational(1));
  EXPECT_THROW(solve_uniform_mcf(oracle::make(4, {{0, 1}, {2, 3}}), p), PreconditionError);
  McfOptions o;
  o.eps = 1.5;
  EXPECT_THROW(solve_uniform_mcf(oracle::k(4), p, o), PreconditionError);
}

TEST(Mcf, RandomExpandersFlowPostconditions) {
  for (std::uint64_t s = 0; s < 8; ++s) {
    auto g = random_regular(24, 3, s);
    auto p = RoutingParams::for_graph(g, half_lambda2(g));
    auto r = solve_uniform_mcf(g, p);
    expect_flow_postconditions(g, p, r, 0.1);
  }
}

TEST(Subdivided, PieceCounts) {
  auto g = oracle::cycle(4);  // edges (0,1) (0,3) (1,2) (2,3)
  auto s = SubdividedGraph::build(g, {1, 1, 2, 0});
  EXPECT_EQ(s.pieces, (std::vector<int>{1, 1, 2, 1}));
  EXPECT_EQ(s.n_total, 5);
  EXPECT_EQ(s.edge_count, 5);
  EXPECT_TRUE(s.is_original(3));
  EXPECT_FALSE(s.is_original(4));
  EXPECT_EQ(s.adj[4], (std::vector<int>{1, 2}));
}

TEST(RegionGrow, ZeroLengthsGiveOneComponent) {
  auto g = oracle::cycle(8);
  auto comps = region_grow_partition(g, 0.5, LengthAssignment{std::vector<double>(8, 0.0)});
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_EQ(comps[0].size(), 8u);
}

TEST(RegionGrow, SmallDeltaGivesSingletons) {
  auto g = oracle::cycle(8);
  LengthAssignment l{std::vector<double>(8, 1.0 / 8)};
  // 8 W log2 n / m = 3, and 1/2 < 3.
  auto comps = region_grow_partition(g, 0.5, l);
  EXPECT_EQ(comps.size(), 8u);
}

TEST(RegionGrow, RandomPostconditions) {
  Rng rng(9);
  for (int t = 0; t < 60; ++t) {
    int n = 4 + static_cast<int>(rng.below(20));
    auto g = oracle::random_connected(n, static_cast<int>(rng.below(2 * n)), rng);
    LengthAssignment l{std::vector<double>(g.m())};
    for (auto& x : l.lengths) x = rng.uniform();
    double w = l.total_weight();
    double lo = 8 * w * std::log2(n) / g.m();
    double delta = lo * (1 + 3 * rng.uniform());
    auto comps = region_grow_partition(g, delta, l);
    std::vector<int> owner(n, -1);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      for (auto v : comps[i]) {
        ASSERT_EQ(owner[v], -1);
        owner[v] = static_cast<int>(i);
      }
    }
    for (int v = 0; v < n; ++v) ASSERT_GE(owner[v], 0);
    int inter = 0;
    for (auto [u, v] : g.edges()) inter += owner[u] != owner[v];
    EXPECT_LT(inter, 8 * w * std::log2(n) / delta);
    int hops = static_cast<int>(std::ceil(delta * g.m() / w));
    for (const auto& c : comps) {
      for (auto u : c) {
        for (auto v : c) {
          if (u < v) {
            ASSERT_LE(oracle::hop_distance(g, l.lengths, u, v, hops), delta + 1e-9);
          }
        }
      }
    }
  }
}

TEST(LowDiameterCore, ZeroLengthsGiveWholeGraph) {
  auto g = oracle::petersen();
  auto r = low_diameter_core(g, Rational(1), LengthAssignment{std::vector<double>(15, 0.0)});
  ASSERT_TRUE(r.core.has_value());
  EXPECT_EQ(r.core->size(), 10u);
}

TEST(LowDiameterCore, K4ValidLengths) {
  auto g = oracle::k(4);
  auto p = RoutingParams::for_graph(g, Rational(1));
  LengthAssignment l{std::vector<double>(6, p.W_star / 6)};
  auto r = low_diameter_core(g, Rational(1), l);
  ASSERT_TRUE(r.core.has_value());
  EXPECT_GE(r.core->size(), 3u);
}

TEST(LowDiameterCore, AdversarialBridgeWeightPostconditions) {
  auto g = oracle::two_triangles_bridge();
  auto p = RoutingParams::for_graph(g, Rational(1));
  LengthAssignment l{std::vector<double>(g.m(), 0.0)};
  l.lengths[*g.edge_id(2, 3)] = p.W_star;
  auto r = low_diameter_core(g, Rational(1), l);
  ASSERT_TRUE(r.core.has_value() != r.cut.has_value());
  if (r.core) {
    EXPECT_GE(r.core->size(), 4u);
  } else {
    EXPECT_LT(r.cut->sparsity, Rational(1));
  }
}

TEST(LowDiameterCore, RejectsHeavyLengths) {
  auto g = oracle::k(4);
  EXPECT_THROW(low_diameter_core(g, Rational(1), LengthAssignment{std::vector<double>(6, 1.0)}),
               PreconditionError);
}

TEST(LayeredCut, WholeCoreIsInfeasible) {
  auto g = oracle::cycle(6);
  LengthAssignment l{std::vector<double>(6, 0.01)};
  auto r = layered_cut(g, Rational(1), l, 5, all_vertices(6));
  ASSERT_TRUE(r.infeasible.has_value());
  EXPECT_DOUBLE_EQ(r.infeasible->distance_sum, 0.0);
  EXPECT_FALSE(r.cut.has_value());
}

TEST(LayeredCut, PathNineMiddleCore) {
  auto g = oracle::path(9);
  LengthAssignment l{std::vector<double>(8, 0.0)};
  l.lengths[*g.edge_id(6, 7)] = 1.0;
  auto r = layered_cut(g, Rational(3), l, 8, VertexSet{1, 2, 3, 4, 5, 6});
  ASSERT_TRUE(r.cut.has_value());
  EXPECT_LT(r.cut->sparsity, Rational(3));
}

TEST(LayeredCut, BarbellSideCut) {
  auto g = oracle::two_k4_bridge();
  LengthAssignment l{std::vector<double>(g.m(), 0.0)};
  for (auto e : std::vector<Edge>{{0, 2}, {0, 3}, {1, 2}, {1, 3}}) l.lengths[*g.edge_id(e.first, e.second)] = 1;
  auto r = layered_cut(g, Rational(10), l, 7, VertexSet{2, 3, 4, 5, 6, 7});
  ASSERT_TRUE(r.cut.has_value());
  EXPECT_LT(r.cut->sparsity, Rational(10));
  EXPECT_EQ(r.cut->sparsity, oracle::sparsity_of(g, r.cut->side_a));
}

TEST(LayeredCut, CoreTooSmall) {
  EXPECT_THROW(layered_cut(oracle::path(9), Rational(1), LengthAssignment{std::vector<double>(8, 1)},
                           8, VertexSet{0, 1}),
               PreconditionError);
}

TEST(LoopErase, RemovesCycles) {
  EXPECT_EQ(detail::loop_erase({0, 1, 2, 1, 3}), (Path{0, 1, 3}));
  EXPECT_EQ(detail::loop_erase({0, 1, 2, 0, 4}), (Path{0, 4}));
  EXPECT_EQ(detail::loop_erase({5}), (Path{5}));
  EXPECT_EQ(detail::loop_erase({0, 1, 2, 3, 2, 1, 4}), (Path{0, 1, 4}));
}

TEST(RouteMatching, K4TwoPairs) {
  auto g = oracle::k(4);
  auto p = RoutingParams::for_graph(g, Rational(1));
  auto r = route_matching(g, p, Matching{{{0, 1}, {2, 3}}}, 7);
  ASSERT_EQ(r.kind, RouteResult::Kind::Paths);
  ASSERT_EQ(r.paths.size(), 2u);
  EXPECT_EQ(r.paths[0].front(), 0);
  EXPECT_EQ(r.paths[0].back(), 1);
  EXPECT_EQ(r.paths[1].front(), 2);
  EXPECT_EQ(r.paths[1].back(), 3);
  for (const auto& path : r.paths) EXPECT_TRUE(oracle::is_simple_path_in(g, path));
  EXPECT_LE(r.max_congestion, 8 * p.eta);
}

TEST(RouteMatching, CycleEightOnePair) {
  auto g = oracle::cycle(8);
  auto p = RoutingParams::for_graph(g, Rational(1, 4));
  auto r = route_matching(g, p, Matching{{{0, 4}}}, 3);
  ASSERT_EQ(r.kind, RouteResult::Kind::Paths);
  EXPECT_TRUE(oracle::is_simple_path_in(g, r.paths[0]));
  EXPECT_LE(static_cast<std::int64_t>(r.paths[0].size()) - 1, 2 * p.L);
}

TEST(RouteMatching, DualGivesSparseCut) {
  auto g = oracle::two_triangles_bridge();
  auto p = RoutingParams::for_graph(g, Rational(200));
  auto r = route_matching(g, p, Matching{{{0, 5}}}, 1);
  ASSERT_EQ(r.kind, RouteResult::Kind::SparseCut);
  EXPECT_LT(r.cut->sparsity, Rational(200));
  EXPECT_EQ(r.cut->sparsity, oracle::sparsity_of(g, r.cut->side_a));
}

TEST(RouteMatching, RejectsNonMatching) {
  auto g = oracle::k(4);
  auto p = RoutingParams::for_graph(g, Rational(1));
  EXPECT_THROW(route_matching(g, p, Matching{{{0, 1}, {1, 2}}}, 1), PreconditionError);
  EXPECT_THROW(route_matching(g, p, Matching{{{0, 0}}}, 1), PreconditionError);
  EXPECT_THROW(route_matching(g, p, Matching{{{0, 9}}}, 1), PreconditionError);
}

TEST(RouteMatching, RandomRegularPathsValid) {
  auto g = random_regular(48, 3, 4);
  auto p = RoutingParams::for_graph(g, half_lambda2(g));
  auto mcf = solve_uniform_mcf(g, p);
  Matching dem;
  for (int i = 0; i < 8; ++i) dem.pairs.emplace_back(i, 47 - i);
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto r = route_matching_with(g, p, mcf, dem, s);
    ASSERT_EQ(r.kind, RouteResult::Kind::Paths);
    for (std::size_t i = 0; i < dem.pairs.size(); ++i) {
      ASSERT_TRUE(oracle::is_simple_path_in(g, r.paths[i]));
      ASSERT_EQ(r.paths[i].front(), dem.pairs[i].first);
      ASSERT_EQ(r.paths[i].back(), dem.pairs[i].second);
    }
  }
  // Same seed, same paths.
  EXPECT_EQ(route_matching_with(g, p, mcf, dem, 5).paths, route_matching_with(g, p, mcf, dem, 5).paths);
}

TEST(RouteMatching, TinyEtaRaisesCongestionExceeded) {
  auto g = oracle::star(6);
  auto p = RoutingParams::for_graph(g, Rational(1));
  p.eta = 0;  // every path touches the centre
  EXPECT_THROW(route_matching(g, p, Matching{{{1, 2}}}, 1), CongestionExceeded);
}
