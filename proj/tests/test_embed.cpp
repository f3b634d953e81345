#include <gtest/gtest.h>

#include "expminor/embed.hpp"
#include "expminor/generators.hpp"
#include "oracles.hpp"

using namespace expminor;

namespace {

Rational half_lambda2(const Graph& g) {
  return Rational::floor_of(lambda2(g).lambda2 / 2, 1000000);
}

EmbedConfig config(Rational alpha, std::uint64_t seed) {
  EmbedConfig c;
  c.alpha = alpha;
  c.seed = seed;
  return c;
}

MinorModel identity_model(const Graph& g) {
  MinorModel m;
  for (int v = 0; v < g.n(); ++v) m.branch_sets.push_back({v});
  for (auto [u, v] : g.edges()) m.edge_paths[{u, v}] = {u, v};
  return m;
}

void expect_outcome_sound(const Graph& g, const Graph& h, Rational alpha, const EmbedOutcome& o) {
  switch (o.kind) {
    case EmbedOutcome::Kind::Model:
      EXPECT_TRUE(verify_model(g, h, o.model).valid());
      break;
    case EmbedOutcome::Kind::NotAnExpander:
      ASSERT_TRUE(o.cut.has_value());
      EXPECT_LT(o.cut->sparsity, alpha);
      EXPECT_EQ(o.cut->sparsity, oracle::sparsity_of(g, o.cut->side_a));
      break;
    case EmbedOutcome::Kind::Failed:
      EXPECT_FALSE(o.failure.empty());
      EXPECT_FALSE(o.stats.stage.empty());
      break;
  }
}

}  // namespace

TEST(ReduceDegree, LowDegreeIsIdentity) {
  auto h = oracle::cycle(5);
  auto red = reduce_degree(h);
  EXPECT_EQ(red.reduced.n(), 5);
  EXPECT_EQ(red.reduced.m(), 5);
  EXPECT_EQ(red.reduced.edges(), h.edges());
}

TEST(ReduceDegree, K5) {
  auto red = reduce_degree(oracle::k(5));
  EXPECT_EQ(red.reduced.n(), 20);
  EXPECT_EQ(red.reduced.m(), 30);
  EXPECT_LE(red.reduced.max_degree(), 3);
  for (int u = 0; u < 5; ++u) {
    ASSERT_EQ(red.cycles[u].size(), 4u);
    for (auto c : red.cycles[u]) EXPECT_EQ(red.lift[c], u);
  }
}

TEST(ReduceDegree, Star) {
  auto red = reduce_degree(oracle::star(4));
  EXPECT_EQ(red.reduced.n(), 8);
  EXPECT_EQ(red.reduced.m(), 8);
  EXPECT_LE(red.reduced.max_degree(), 3);
  EXPECT_TRUE(brute_force_is_minor(red.reduced, oracle::star(4)));
}

TEST(ReduceDegree, EdgeMapPreservesEndpoints) {
  auto h = oracle::petersen();
  auto k6 = oracle::k(6);
  for (const Graph* g : {&h, &k6}) {
    auto red = reduce_degree(*g);
    ASSERT_EQ(static_cast<int>(red.edge_map.size()), g->m());
    for (int id = 0; id < g->m(); ++id) {
      auto [a, b] = red.reduced.edge(red.edge_map[id]);
      auto [u, v] = g->edge(id);
      EXPECT_EQ(std::minmax(red.lift[a], red.lift[b]), std::minmax(u, v));
    }
  }
}

TEST(ReduceDegree, LiftRoundTrip) {
  for (const auto& h : {oracle::k(5), oracle::star(5), oracle::petersen(), oracle::k(6)}) {
    auto red = reduce_degree(h);
    auto lifted = lift_reduced_model(h, red, identity_model(red.reduced));
    auto r = verify_model(red.reduced, h, lifted);
    EXPECT_TRUE(r.valid()) << r.violations.front().clause << " " << r.violations.front().witness;
  }
}

TEST(Embed, Degenerate) {
  auto o = embed_minor(oracle::k(4), config(Rational(1, 2), 1), Graph(0, {}));
  EXPECT_EQ(o.kind, EmbedOutcome::Kind::Model);
  EXPECT_TRUE(o.model.branch_sets.empty());

  auto single = embed_minor(Graph(1, {}), config(Rational(1, 2), 1), Graph(1, {}));
  EXPECT_EQ(single.kind, EmbedOutcome::Kind::Model);
  EXPECT_EQ(single.model.branch_sets, (std::vector<VertexSet>{{0}}));

  auto too_many = embed_minor(Graph(1, {}), config(Rational(1, 2), 1), Graph(3, {}));
  EXPECT_EQ(too_many.kind, EmbedOutcome::Kind::Failed);

  auto k1_host = embed_minor(Graph(1, {}), config(Rational(1, 2), 1), oracle::path(2));
  EXPECT_EQ(k1_host.kind, EmbedOutcome::Kind::Failed);

  EXPECT_THROW(embed_minor(Graph(0, {}), config(Rational(1, 2), 1), oracle::path(2)),
               PreconditionError);
  EXPECT_THROW(embed_minor(oracle::k(4), config(Rational(0), 1), oracle::path(2)),
               PreconditionError);
}

TEST(Embed, DisconnectedHostCertified) {
  auto g = oracle::make(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  auto o = embed_minor(g, config(Rational(1, 2), 1), oracle::path(2));
  ASSERT_EQ(o.kind, EmbedOutcome::Kind::NotAnExpander);
  EXPECT_EQ(o.cut->sparsity, Rational(0));
}

TEST(Embed, BarbellCertifiedWithAndWithoutPrescreen) {
  auto g = oracle::two_k4_bridge();
  for (bool pre : {true, false}) {
    auto cfg = config(Rational(1), 3);
    cfg.spectral_prescreen = pre;
    auto o = embed_minor(g, cfg, oracle::path(2));
    ASSERT_EQ(o.kind, EmbedOutcome::Kind::NotAnExpander) << o.failure;
    EXPECT_LE(o.cut->sparsity, Rational(1, 4));
    EXPECT_EQ(o.cut->sparsity, oracle::sparsity_of(g, o.cut->side_a));
  }
}

TEST(Embed, StrictSizeGuard) {
  auto g = random_regular(64, 3, 2);
  auto cfg = config(Rational(1, 10), 1);
  cfg.size_guard = SizeGuard::Strict;
  EXPECT_EQ(strict_size_bound(64, 3, Rational(1, 10), 1), 0);
  auto o = embed_minor(g, cfg, oracle::cycle(3));
  EXPECT_EQ(o.kind, EmbedOutcome::Kind::Failed);
  EXPECT_EQ(o.stats.stage, "size-guard");
}

TEST(Embed, RhoFormula) {
  // 3 ceil(4 * 9 * 49 / (1/4)) for n = 128, d = 3, alpha = 1/2.
  EXPECT_EQ(rho_formula(128, 3, Rational(1, 2), 1), 3 * 7056);
}

TEST(Embed, SmallCyclesIntoRandomRegular) {
  auto g = random_regular(128, 3, 7);
  auto alpha = half_lambda2(g);
  for (int k : {3, 4}) {
    auto h = oracle::cycle(k);
    for (std::uint64_t s = 0; s < 3; ++s) {
      auto o = embed_minor(g, config(alpha, s), h);
      expect_outcome_sound(g, h, alpha, o);
      EXPECT_EQ(o.kind, EmbedOutcome::Kind::Model) << o.failure;
    }
  }
}

TEST(Embed, SameSeedSameResult) {
  auto g = random_regular(96, 3, 1);
  auto alpha = half_lambda2(g);
  auto a = embed_minor(g, config(alpha, 42), oracle::cycle(4));
  auto b = embed_minor(g, config(alpha, 42), oracle::cycle(4));
  EXPECT_EQ(a.kind, b.kind);
  EXPECT_EQ(a.model.branch_sets, b.model.branch_sets);
  EXPECT_EQ(a.model.edge_paths, b.model.edge_paths);
  EXPECT_EQ(a.failure, b.failure);
}

TEST(Embed, OutcomesSoundAcrossHostsAndTargets) {
  std::vector<std::pair<Graph, Rational>> hosts = {
      {oracle::petersen(), Rational(1, 2)},
      {grid_graph(4, 4), Rational(1, 2)},
      {two_expanders_bridge(32, 3, 5), Rational(1, 4)},
      {random_regular(64, 3, 9), Rational(1, 10)},
  };
  std::vector<Graph> targets = {oracle::path(2), oracle::cycle(3), oracle::star(4), oracle::k(4)};
  for (const auto& [g, alpha] : hosts) {
    for (const auto& h : targets) {
      for (std::uint64_t s = 0; s < 2; ++s) {
        auto o = embed_minor(g, config(alpha, s), h);
        expect_outcome_sound(g, h, alpha, o);
        if (o.kind == EmbedOutcome::Kind::Model && g.n() <= kBruteForceMaxN) {
          EXPECT_TRUE(brute_force_is_minor(g, h));
        }
      }
    }
  }
}

TEST(Embed, ZeroRetriesStillSound) {
  auto g = random_regular(64, 3, 4);
  auto cfg = config(Rational(1, 20), 8);
  cfg.max_retries = 0;
  auto o = embed_minor(g, cfg, oracle::cycle(5));
  expect_outcome_sound(g, oracle::cycle(5), cfg.alpha, o);
  EXPECT_EQ(o.stats.retries_used, 0);
}
