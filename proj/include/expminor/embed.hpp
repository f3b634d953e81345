#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "expminor/disjoint_paths.hpp"
#include "expminor/flow_routing.hpp"
#include "expminor/graph.hpp"
#include "expminor/minor_model.hpp"
#include "expminor/partition.hpp"
#include "expminor/spectral.hpp"

namespace expminor {

// ---------------------------------------------------------------------------
// Degree reduction

struct DegreeReduction {
  Graph reduced;
  /// reduced vertex -> original vertex.
  std::vector<Vertex> lift;
  /// original vertex -> its reduced vertices (a cycle when degree > 3).
  std::vector<std::vector<Vertex>> cycles;
  /// original edge id -> reduced edge id.
  std::vector<int> edge_map;
};

/// Replaces every vertex of degree d_u > 3 by a cycle on d_u vertices, the
/// i-th incident edge attached to the i-th cycle vertex.
inline DegreeReduction reduce_degree(const Graph& h) {
  DegreeReduction red;
  red.cycles.resize(h.n());
  int next = 0;
  for (int u = 0; u < h.n(); ++u) {
    int copies = h.degree(u) > 3 ? h.degree(u) : 1;
    for (int i = 0; i < copies; ++i) {
      red.cycles[u].push_back(next++);
      red.lift.push_back(u);
    }
  }
  auto attach = [&](Vertex u, Vertex v) {
    if (red.cycles[u].size() == 1) return red.cycles[u][0];
    auto nb = h.neighbors(u);
    auto slot = std::lower_bound(nb.begin(), nb.end(), v) - nb.begin();
    return red.cycles[u][slot];
  };
  std::vector<Edge> edges;
  for (int u = 0; u < h.n(); ++u) {
    const auto& c = red.cycles[u];
    if (c.size() > 1) {
      for (std::size_t i = 0; i < c.size(); ++i) edges.emplace_back(c[i], c[(i + 1) % c.size()]);
    }
  }
  std::vector<Edge> cross;
  for (auto [u, v] : h.edges()) cross.emplace_back(attach(u, v), attach(v, u));
  edges.insert(edges.end(), cross.begin(), cross.end());
  red.reduced = Graph(next, edges);
  for (auto [a, b] : cross) red.edge_map.push_back(*red.reduced.edge_id(a, b));
  return red;
}

/// Contracts the cycles of a model of the reduced graph into a model of h.
inline MinorModel lift_reduced_model(const Graph& h, const DegreeReduction& red,
                                     const MinorModel& reduced_model) {
  MinorModel m;
  m.branch_sets.resize(h.n());
  for (int u = 0; u < h.n(); ++u) {
    VertexSet x;
    for (auto c : red.cycles[u]) {
      const auto& bs = reduced_model.branch_sets[c];
      x.insert(x.end(), bs.begin(), bs.end());
    }
    const auto& c = red.cycles[u];
    if (c.size() > 1) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        Vertex a = c[i], b = c[(i + 1) % c.size()];
        const auto& p = reduced_model.edge_paths.at({std::min(a, b), std::max(a, b)});
        x.insert(x.end(), p.begin(), p.end());
      }
    }
    m.branch_sets[u] = normalized(std::move(x));
  }
  for (int id = 0; id < h.m(); ++id) {
    auto re = red.reduced.edge(red.edge_map[id]);
    m.edge_paths[h.edge(id)] = reduced_model.edge_paths.at(re);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Embedding

enum class SizeGuard { Permissive, Strict };

struct EmbedConfig {
  Rational alpha = Rational(1, 2);
  int max_retries = 5;
  std::uint64_t seed = 0;
  /// Constant c in rho = 3 ceil(4 c d^2 log2^2 n / alpha^2).
  double rho_c = 1;
  SizeGuard size_guard = SizeGuard::Permissive;
  /// Constant in the strict bound floor(n / (c log2^2 n) * alpha^3 / d^5).
  double size_c = 1;
  double c_eta = 128;
  McfOptions mcf;
  long resample_cap = 0;  // 0 selects 1000 r q
  bool spectral_prescreen = true;
};

struct EmbedStats {
  int n = 0;
  int d = 0;
  int reduced_n = 0;
  int reduced_m = 0;
  std::int64_t rho = 0;
  std::int64_t rho_effective = 0;
  bool rho_downgraded = false;
  std::int64_t q = 0;
  std::int64_t L = 0;
  std::int64_t eta = 0;
  int outer_iterations = 0;
  int retries_used = 0;
  int restarts = 0;
  long resamples = 0;
  std::string stage;  // stage that decided the outcome
  std::map<std::string, double> timings_ms;
};

struct EmbedOutcome {
  enum class Kind { Model, NotAnExpander, Failed };
  Kind kind = Kind::Failed;
  MinorModel model;
  std::optional<Cut> cut;
  std::string failure;
  EmbedStats stats;
};

inline std::int64_t rho_formula(int n, int d, Rational alpha, double c) {
  long double l = std::max(1.0L, std::log2(static_cast<long double>(std::max(2, n))));
  long double a = alpha.to_long_double();
  return 3 * static_cast<std::int64_t>(std::ceil(4.0L * c * d * d * l * l / (a * a)));
}

inline std::int64_t strict_size_bound(int n, int d, Rational alpha, double c) {
  long double l = std::max(1.0L, std::log2(static_cast<long double>(std::max(2, n))));
  long double a = alpha.to_long_double();
  long double dd = std::max(1, d);
  return static_cast<std::int64_t>(
      std::floor(n / (c * l * l) * a * a * a / (dd * dd * dd * dd * dd)));
}

namespace detail {

class StageTimer {
 public:
  StageTimer(EmbedStats& s, std::string name)
      : stats_(s), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    auto dt = std::chrono::steady_clock::now() - start_;
    stats_.timings_ms[name_] += std::chrono::duration<double, std::milli>(dt).count();
  }

 private:
  EmbedStats& stats_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

inline bool is_good_partition(const Graph& g, const VertexSet& a, const VertexSet& b) {
  const std::int64_t n = g.n();
  const std::int64_t d = std::max(1, g.max_degree());
  auto big = [&](const VertexSet& s) { return 4 * d * static_cast<std::int64_t>(s.size()) >= n; };
  return big(a) && big(b) && is_connected_subset(g, a) && is_connected_subset(g, b) &&
         a.size() + b.size() == static_cast<std::size_t>(n);
}

}  // namespace detail

/// Either a verified model of h in g, a cut of g with sparsity below alpha,
/// or a failure report.
inline EmbedOutcome embed_minor(const Graph& g, const EmbedConfig& cfg, const Graph& h) {
  const Rational alpha = cfg.alpha;
  if (!(alpha > Rational(0))) throw PreconditionError("embed_minor: alpha must be positive");
  if (cfg.max_retries < 0) throw PreconditionError("embed_minor: negative retry budget");
  EmbedOutcome out;
  auto& st = out.stats;
  st.n = g.n();
  st.d = g.max_degree();

  auto fail = [&](std::string stage, std::string why) {
    out.kind = EmbedOutcome::Kind::Failed;
    out.stats.stage = std::move(stage);
    out.failure = std::move(why);
    return out;
  };
  auto certify = [&](std::string stage, Cut cut) {
    if (!(cut.sparsity < alpha)) {
      throw Error("embed_minor: certificate with sparsity " + cut.sparsity.str() +
                  " is not below alpha (internal)");
    }
    out.kind = EmbedOutcome::Kind::NotAnExpander;
    out.cut = std::move(cut);
    out.stats.stage = std::move(stage);
    return out;
  };
  auto model_out = [&](std::string stage, MinorModel m) {
    auto check = verify_model(g, h, m);
    if (!check.valid()) {
      throw Error("embed_minor: assembled model fails verification: " +
                  check.violations.front().clause + " " + check.violations.front().witness);
    }
    out.kind = EmbedOutcome::Kind::Model;
    out.model = std::move(m);
    out.stats.stage = std::move(stage);
    return out;
  };

  if (h.n() == 0) return model_out("degenerate", MinorModel{});
  if (g.n() == 0) throw PreconditionError("embed_minor: empty host graph");
  {
    auto comps = connected_components(g);
    if (comps.size() > 1) return certify("components", cut_of(g, comps[0]));
  }
  if (h.m() == 0) {
    if (h.n() > g.n()) return fail("degenerate", "target has more vertices than the host");
    MinorModel m;
    for (int u = 0; u < h.n(); ++u) m.branch_sets.push_back({u});
    return model_out("degenerate", std::move(m));
  }
  if (g.n() < 2) return fail("degenerate", "host has a single vertex");
  if (cfg.size_guard == SizeGuard::Strict) {
    auto bound = strict_size_bound(g.n(), st.d, alpha, cfg.size_c);
    if (h.size() > bound) {
      return fail("size-guard", "target size " + std::to_string(h.size()) +
                                    " exceeds strict bound " + std::to_string(bound));
    }
  }
  if (cfg.spectral_prescreen) {
    detail::StageTimer t(st, "prescreen");
    try {
      auto sweep = sweep_cut(g);
      if (sweep.sparsity < alpha) {
        return certify("prescreen", connected_cut_repair(g, sweep));
      }
    } catch (const ConvergenceError&) {
      // fall through to the combinatorial loop
    }
  }

  const auto red = reduce_degree(h);
  const Graph& hr = red.reduced;
  st.reduced_n = hr.n();
  st.reduced_m = hr.m();
  const int n = g.n();
  const std::int64_t d = std::max(1, st.d);
  st.rho = rho_formula(n, static_cast<int>(d), alpha, cfg.rho_c);

  // Retry budget: the first half buys stage-local routing retries, the
  // rest buys restarts of the whole loop.
  const int stage_share = (cfg.max_retries + 1) / 2;
  int stage_left = stage_share;
  int restarts_left = cfg.max_retries - stage_share;
  std::uint64_t attempt = 0;
  VertexSet v1, v2;
  bool restart = true;
  int outer = 0;
  while (true) {
    if (restart) {
      std::tie(v1, v2) = good_partition_init(g);
      restart = false;
      outer = 0;
    }
    if (++outer > g.m() + 1) break;
    ++st.outer_iterations;
    if (!detail::is_good_partition(g, v1, v2)) {
      throw Error("embed_minor: good-partition invariant broken (internal)");
    }
    auto in1 = membership(n, v1);
    const std::int64_t cross = crossing_count(g, in1);
    // |E(V1,V2)| < alpha n / (4d)
    if (static_cast<__int128>(cross) * 4 * d * alpha.den() <
        static_cast<__int128>(alpha.num()) * n) {
      return certify("partition", cut_of(g, v2));
    }

    auto matching = greedy_matching_across(g, v1, v2);
    std::vector<Vertex> partner(n, -1);
    VertexSet z2;
    for (auto [a, b] : matching.pairs) {
      partner[a] = b;
      partner[b] = a;
      z2.push_back(b);
    }
    z2 = normalized(std::move(z2));

    const int r = hr.n();
    // Before giving up on a terminal shortage, the current bipartition may
    // itself be a certificate.
    auto partition_cut = [&]() -> std::optional<Cut> {
      auto c = cut_of(g, v2);
      if (c.sparsity < alpha) return c;
      return std::nullopt;
    };
    if (static_cast<int>(z2.size()) < r) {
      if (auto c = partition_cut()) return certify("partition", std::move(*c));
      return fail("terminals", "terminal shortage: " + std::to_string(z2.size()) +
                                   " matched terminals for " + std::to_string(r) +
                                   " target vertices");
    }
    auto sub2 = induced_subgraph(g, v2);
    VertexSet z2_local;
    for (auto v : z2) z2_local.push_back(sub2.from_parent[v]);
    Grouping grouping;
    {
      detail::StageTimer t(st, "grouping");
      try {
        grouping = spanning_tree_grouping(sub2.graph, z2_local, r);
      } catch (const GroupingError& e) {
        return fail("grouping", e.what());
      }
    }
    auto is_z2 = membership(n, z2);
    std::vector<VertexSet> parts(r), terms(r);
    for (int i = 0; i < r; ++i) {
      parts[i] = sub2.lift(grouping.parts[i]);
      for (auto v : parts[i]) {
        if (is_z2[v]) terms[i].push_back(v);
      }
    }
    std::int64_t rho_eff = st.rho;
    for (int i = 0; i < r; ++i) {
      if (hr.degree(i) == 0) continue;
      rho_eff = std::min<std::int64_t>(rho_eff, static_cast<std::int64_t>(terms[i].size()) / hr.degree(i));
    }
    st.rho_effective = rho_eff;
    st.rho_downgraded = rho_eff < st.rho;
    if (rho_eff < 1) {
      if (auto c = partition_cut()) return certify("partition", std::move(*c));
      std::string counts;
      for (int i = 0; i < r; ++i) {
        counts += (i ? "," : "") + std::to_string(terms[i].size()) + "/" +
                  std::to_string(hr.degree(i));
      }
      return fail("terminals", "terminal shortage: terminals/degree per part = " + counts);
    }

    // Carve Z'_i(e) in edge-id order, rho_eff terminals each.
    std::map<std::pair<int, int>, VertexSet> carved;  // (vertex, edge id)
    for (int i = 0; i < r; ++i) {
      std::vector<int> ids(hr.incident_edges(i).begin(), hr.incident_edges(i).end());
      std::sort(ids.begin(), ids.end());
      for (std::size_t t = 0; t < ids.size(); ++t) {
        auto first = terms[i].begin() + static_cast<std::ptrdiff_t>(t * rho_eff);
        carved[{i, ids[t]}] = VertexSet(first, first + rho_eff);
      }
    }
    auto sub1 = induced_subgraph(g, v1);
    const int edges_r = hr.m();
    std::vector<VertexSet> family(2 * edges_r);
    for (int k = 0; k < edges_r; ++k) {
      auto [a, b] = hr.edge(k);
      for (int side = 0; side < 2; ++side) {
        int owner = side == 0 ? a : b;
        VertexSet mapped;
        for (auto z : carved[{owner, k}]) mapped.push_back(sub1.from_parent[partner[z]]);
        family[k + side * edges_r] = normalized(std::move(mapped));
      }
    }
    auto params = RoutingParams::for_graph(sub1.graph, alpha / Rational(2), cfg.c_eta);
    st.q = rho_eff;
    st.L = params.L;
    st.eta = params.eta;

    McfResult mcf;
    {
      detail::StageTimer t(st, "mcf");
      try {
        mcf = solve_uniform_mcf(sub1.graph, params, cfg.mcf);
      } catch (const ConvergenceError& e) {
        return fail("mcf", e.what());
      }
    }
    GroupRouteResult routed;
    while (true) {
      detail::StageTimer t(st, "routing");
      try {
        routed = route_group_family_with(sub1.graph, params, mcf, family,
                                         derive_seed(cfg.seed, attempt++), cfg.resample_cap);
        break;
      } catch (const RetryableError& e) {
        if (stage_left > 0) {
          --stage_left;
        } else if (restarts_left > 0) {
          --restarts_left;
          ++st.restarts;
          restart = true;
        } else {
          return fail("routing", std::string("retries exhausted; last error: ") + e.what());
        }
        ++st.retries_used;
        if (restart) break;
      } catch (const ChainError& e) {
        return fail("routing", e.what());
      }
    }
    if (restart) continue;
    st.resamples += routed.resamples;

    if (routed.kind == GroupRouteResult::Kind::Paths) {
      // Branch set i: W_i plus the V1 endpoints of its routed paths.
      MinorModel reduced_model;
      reduced_model.branch_sets = parts;
      for (int k = 0; k < edges_r; ++k) {
        auto q = sub1.lift_path(routed.paths[k]);
        auto [a, b] = hr.edge(k);
        reduced_model.branch_sets[a].push_back(q.front());
        reduced_model.branch_sets[b].push_back(q.back());
        reduced_model.edge_paths[hr.edge(k)] = std::move(q);
      }
      for (auto& bs : reduced_model.branch_sets) bs = normalized(std::move(bs));
      auto reduced_check = verify_model(g, hr, reduced_model);
      if (!reduced_check.valid()) {
        throw Error("embed_minor: reduced model fails verification: " +
                    reduced_check.violations.front().clause + " " +
                    reduced_check.violations.front().witness);
      }
      return model_out("routing", lift_reduced_model(h, red, reduced_model));
    }

    // Sparse cut inside G[V1]: move its smaller connected side into V2.
    auto repaired = connected_cut_repair(sub1.graph, *routed.cut);
    VertexSet xs = sub1.lift(repaired.side_a);
    VertexSet ys = sub1.lift(repaired.side_b);
    if (ys.size() > xs.size()) std::swap(xs, ys);
    auto y_cut = cut_of(g, ys);
    if (static_cast<__int128>(y_cut.crossing_edges.size()) * alpha.den() <
        static_cast<__int128>(alpha.num()) * static_cast<std::int64_t>(ys.size())) {
      return certify("repartition", std::move(y_cut));
    }
    VertexSet new_v2 = v2;
    new_v2.insert(new_v2.end(), ys.begin(), ys.end());
    new_v2 = normalized(std::move(new_v2));
    auto new_in1 = membership(n, xs);
    if (crossing_count(g, new_in1) >= cross) {
      throw Error("embed_minor: repartition did not reduce |E(V1,V2)| (internal)");
    }
    v1 = std::move(xs);
    v2 = std::move(new_v2);
    if (v1.size() < v2.size()) std::swap(v1, v2);
  }
  return fail("loop", "outer iteration bound reached");
}

}  // namespace expminor
