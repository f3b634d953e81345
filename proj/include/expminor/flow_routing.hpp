#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "expminor/graph.hpp"
#include "expminor/partition.hpp"
#include "expminor/rng.hpp"

namespace expminor {

/// Failures that a fresh seed may fix.
struct RetryableError : Error {
  using Error::Error;
};

struct CongestionExceeded : RetryableError {
  using RetryableError::RetryableError;
};

/// The dual-to-cut conversion did not produce a sparse cut.
struct ChainError : Error {
  using Error::Error;
};

/// Routing constants derived from (alpha, max degree, vertex count).
struct RoutingParams {
  Rational alpha;
  int d = 1;
  int n = 1;
  double log2n = 1;       // log2(n), clamped to >= 1
  std::int64_t L = 1;     // ceil(64 d log2 n / alpha)
  double W_star = 0;      // alpha / (64 n log2 n)
  std::int64_t eta = 1;   // ceil(c_eta d log2 n / alpha)
  double c_eta = 128;

  static RoutingParams make(int n, int d, Rational alpha, double c_eta = 128) {
    if (!(alpha > Rational(0))) {
      throw PreconditionError("RoutingParams: alpha must be positive");
    }
    RoutingParams p;
    p.alpha = alpha;
    p.n = std::max(1, n);
    p.d = std::max(1, d);
    p.c_eta = c_eta;
    p.log2n = std::max(1.0L, std::log2(static_cast<long double>(p.n)));
    const long double a = alpha.to_long_double();
    p.L = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(64.0L * p.d * p.log2n / a)));
    p.W_star = static_cast<double>(a / (64.0L * p.n * p.log2n));
    p.eta = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(c_eta * p.d * p.log2n / a)));
    return p;
  }

  static RoutingParams for_graph(const Graph& g, Rational alpha,
                                 double c_eta = 128) {
    return make(g.n(), g.max_degree(), alpha, c_eta);
  }

  /// Hop limit actually needed: simple paths never exceed n - 1 hops.
  int hop_cap() const {
    return static_cast<int>(std::min<std::int64_t>(L, std::max(1, n - 1)));
  }
};

using Path = std::vector<Vertex>;

struct WeightedPath {
  Path path;
  double value = 0;
};

/// Per-edge lengths indexed by edge id.
struct LengthAssignment {
  std::vector<double> lengths;
  double total_weight() const {
    double s = 0;
    for (double x : lengths) s += x;
    return s;
  }
};

/// Path flow for the uniform demand over unordered pairs u < v. Paths of
/// pair (u, v) run from u to v.
struct FlowSolution {
  int n = 0;
  double per_pair_demand = 0;
  std::vector<std::vector<WeightedPath>> by_pair;

  static std::size_t pair_index(int n, Vertex u, Vertex v) {
    if (u > v) std::swap(u, v);
    auto uu = static_cast<std::size_t>(u);
    return uu * n - uu * (uu + 1) / 2 + static_cast<std::size_t>(v - u - 1);
  }
  const std::vector<WeightedPath>& paths(Vertex u, Vertex v) const {
    return by_pair[pair_index(n, u, v)];
  }
};

/// Diagnostic dump: one "u v value: path" line per flow path.
inline std::string format_flow(const FlowSolution& f) {
  std::ostringstream out;
  out << "FLOW n=" << f.n << " demand=" << f.per_pair_demand << "\n";
  for (const auto& group : f.by_pair) {
    for (const auto& wp : group) {
      out << wp.path.front() << " " << wp.path.back() << " " << wp.value << ":";
      for (auto v : wp.path) out << " " << v;
      out << "\n";
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Hop-bounded shortest paths

/// dist[h][v] dynamic program over h = 0..max_hops, stopping early once a
/// layer changes nothing. Relaxations are strict and scanned by vertex
/// index, so ties keep the earliest predecessor.
class HopBoundedPaths {
 public:
  HopBoundedPaths(const Graph& g, const std::vector<double>& lengths,
                  std::span<const Vertex> sources, int max_hops)
      : n_(g.n()) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    dist_.assign(n_, inf);
    for (auto s : sources) dist_[s] = 0;
    std::vector<double> prev;
    for (int h = 1; h <= max_hops; ++h) {
      prev = dist_;
      std::vector<int> par(n_, -1);
      bool changed = false;
      for (int v = 0; v < n_; ++v) {
        if (prev[v] == inf) continue;
        auto nb = g.neighbors(v);
        auto ids = g.incident_edges(v);
        for (std::size_t i = 0; i < nb.size(); ++i) {
          double cand = prev[v] + lengths[ids[i]];
          if (cand < dist_[nb[i]]) {
            dist_[nb[i]] = cand;
            par[nb[i]] = v;
            changed = true;
          }
        }
      }
      if (!changed) break;
      parents_.push_back(std::move(par));
    }
  }

  double dist(Vertex v) const { return dist_[v]; }
  const std::vector<double>& dists() const { return dist_; }

  /// Vertices from the nearest source to t; empty when unreachable.
  Path path_to(Vertex t) const {
    if (dist_[t] == std::numeric_limits<double>::infinity()) return {};
    Path rev{t};
    int h = static_cast<int>(parents_.size());
    Vertex v = t;
    while (h > 0) {
      while (h > 0 && parents_[h - 1][v] == -1) --h;
      if (h == 0) break;
      v = parents_[h - 1][v];
      rev.push_back(v);
      --h;
    }
    return Path(rev.rbegin(), rev.rend());
  }

 private:
  int n_;
  std::vector<double> dist_;
  std::vector<std::vector<int>> parents_;
};

/// Sum over unordered pairs of L-hop bounded distances.
inline double pairwise_distance_sum(const Graph& g,
                                    const std::vector<double>& lengths,
                                    int max_hops) {
  double total = 0;
  for (int s = 0; s < g.n(); ++s) {
    Vertex src[] = {s};
    HopBoundedPaths sp(g, lengths, src, max_hops);
    for (int t = s + 1; t < g.n(); ++t) total += sp.dist(t);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Uniform multicommodity flow (LP-1 / LP-2)

struct McfResult {
  enum class Kind { Flow, Dual };
  Kind kind = Kind::Flow;
  FlowSolution flow;
  LengthAssignment dual;  // normalized so the pairwise distance sum is 1
  int phases = 0;
  double primal_bound = 0;  // best achievable per-pair demand found
  double dual_bound = 0;    // smallest W(l) / sum D found
};

struct McfOptions {
  double eps = 0.1;
  /// Overrides the default phase cap of 20 m ln m / eps^2 when positive.
  long max_phases = 0;
};

/// Multiplicative-weights approximation of LP-1 against LP-2.
///
/// Each phase routes one unit per pair along hop-bounded shortest paths
/// under the current lengths, then raises each edge length by a factor
/// (1 + eps * load / max_load). The average of the phase routings is the
/// primal; every phase's lengths give a dual bound W(l) / sum D(l).
inline McfResult solve_uniform_mcf(const Graph& g, const RoutingParams& params,
                                   McfOptions opts = {}) {
  const int n = g.n();
  const int m = g.m();
  if (n < 2) throw PreconditionError("solve_uniform_mcf: need n >= 2");
  if (!is_connected(g)) {
    throw PreconditionError("solve_uniform_mcf: graph is disconnected");
  }
  if (!(opts.eps > 0 && opts.eps < 1)) {
    throw PreconditionError("solve_uniform_mcf: eps must lie in (0, 1)");
  }
  const int hops = params.hop_cap();
  const double w_star = params.W_star;
  long cap = opts.max_phases;
  if (cap <= 0) {
    double mm = std::max(2, m);
    cap = static_cast<long>(std::ceil(20.0 * mm * std::log(mm) /
                                      (opts.eps * opts.eps)));
  }

  const std::size_t num_pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
  std::vector<double> lengths(m, 1.0);
  std::vector<double> total_load(m, 0.0);
  // Each phase contributes one unit per pair; identical paths are merged.
  std::vector<std::vector<WeightedPath>> units(num_pairs);

  McfResult res;
  res.dual_bound = std::numeric_limits<double>::infinity();
  for (long phase = 1; phase <= cap; ++phase) {
    std::vector<double> load(m, 0.0);
    double dist_sum = 0;
    for (int s = 0; s < n; ++s) {
      Vertex src[] = {s};
      HopBoundedPaths sp(g, lengths, src, hops);
      for (int t = s + 1; t < n; ++t) {
        if (sp.dist(t) == std::numeric_limits<double>::infinity()) {
          throw PreconditionError("solve_uniform_mcf: pair beyond hop limit");
        }
        dist_sum += sp.dist(t);
        auto path = sp.path_to(t);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          load[*g.edge_id(path[i], path[i + 1])] += 1;
        }
        auto& bucket = units[FlowSolution::pair_index(n, s, t)];
        auto it = std::find_if(bucket.begin(), bucket.end(),
                               [&](const WeightedPath& w) { return w.path == path; });
        if (it == bucket.end()) {
          bucket.push_back({std::move(path), 1.0});
        } else {
          it->value += 1.0;
        }
      }
    }
    double weight = 0;
    for (double x : lengths) weight += x;
    double dual = weight / dist_sum;
    if (dual < res.dual_bound) {
      res.dual_bound = dual;
      if (dual < w_star) {
        res.kind = McfResult::Kind::Dual;
        res.dual.lengths = lengths;
        for (auto& x : res.dual.lengths) x /= dist_sum;
        res.phases = static_cast<int>(phase);
        res.primal_bound = 0;
        return res;
      }
    }

    double max_total = 0, max_phase = 0;
    for (int e = 0; e < m; ++e) {
      total_load[e] += load[e];
      max_total = std::max(max_total, total_load[e]);
      max_phase = std::max(max_phase, load[e]);
    }
    double primal = static_cast<double>(phase) / max_total;
    res.primal_bound = std::max(res.primal_bound, primal);
    bool enough = primal >= w_star;
    bool gap_closed = primal >= (1 - opts.eps) * res.dual_bound;
    if (enough || gap_closed) {
      double demand = enough ? w_star : primal;
      double scale = demand / static_cast<double>(phase);
      res.kind = McfResult::Kind::Flow;
      res.flow.n = n;
      res.flow.per_pair_demand = demand;
      res.flow.by_pair = std::move(units);
      for (auto& bucket : res.flow.by_pair) {
        for (auto& wp : bucket) wp.value *= scale;
        std::erase_if(bucket, [](const WeightedPath& w) { return w.value < 1e-12; });
      }
      res.phases = static_cast<int>(phase);
      return res;
    }
    for (int e = 0; e < m; ++e) {
      lengths[e] *= 1.0 + opts.eps * load[e] / max_phase;
    }
  }
  throw ConvergenceError("solve_uniform_mcf: no decision within " +
                         std::to_string(cap) + " phases");
}

struct FlowCheck {
  double max_edge_congestion = 0;
  double min_pair_flow = 0;
  std::size_t max_hops = 0;
  bool paths_valid = true;  // simple, edges of g, endpoints match the pair
};

inline FlowCheck check_flow(const Graph& g, const FlowSolution& f) {
  FlowCheck c;
  c.min_pair_flow = std::numeric_limits<double>::infinity();
  std::vector<double> load(g.m(), 0);
  std::vector<int> seen(g.n(), -1);
  int stamp = 0;
  for (int u = 0; u < g.n(); ++u) {
    for (int v = u + 1; v < g.n(); ++v) {
      double sum = 0;
      for (const auto& wp : f.paths(u, v)) {
        sum += wp.value;
        const auto& p = wp.path;
        if (p.empty() || p.front() != u || p.back() != v) c.paths_valid = false;
        ++stamp;
        for (auto x : p) {
          if (seen[x] == stamp) c.paths_valid = false;
          seen[x] = stamp;
        }
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
          auto id = g.edge_id(p[i], p[i + 1]);
          if (!id) {
            c.paths_valid = false;
            continue;
          }
          load[*id] += wp.value;
        }
        c.max_hops = std::max(c.max_hops, p.size() - 1);
      }
      c.min_pair_flow = std::min(c.min_pair_flow, sum);
    }
  }
  for (double x : load) c.max_edge_congestion = std::max(c.max_edge_congestion, x);
  return c;
}

// ---------------------------------------------------------------------------
// Subdivided graph G+

/// Each edge e becomes a path of k_e = max(1, ceil(|E| l(e) / W)) edges.
/// Original vertices keep their ids; the internal vertices of edge e are
/// first_internal[e] .. first_internal[e] + k_e - 2.
struct SubdividedGraph {
  int n_original = 0;
  int n_total = 0;
  std::vector<int> pieces;
  std::vector<int> first_internal;
  std::vector<std::vector<int>> adj;
  int edge_count = 0;

  bool is_original(int x) const { return x < n_original; }

  static SubdividedGraph build(const Graph& g, const std::vector<double>& lengths) {
    SubdividedGraph s;
    s.n_original = g.n();
    const int m = g.m();
    double w = 0;
    for (double x : lengths) w += x;
    s.pieces.assign(m, 1);
    s.first_internal.assign(m, -1);
    int next = g.n();
    for (int e = 0; e < m; ++e) {
      if (w > 0) {
        double k = std::ceil(static_cast<double>(m) * lengths[e] / w - 1e-12);
        s.pieces[e] = std::max(1, static_cast<int>(k));
      }
      s.first_internal[e] = next;
      next += s.pieces[e] - 1;
    }
    s.n_total = next;
    s.adj.assign(next, {});
    for (int e = 0; e < m; ++e) {
      auto [u, v] = g.edge(e);
      int prev = u;
      for (int i = 0; i < s.pieces[e] - 1; ++i) {
        int x = s.first_internal[e] + i;
        s.adj[prev].push_back(x);
        s.adj[x].push_back(prev);
        prev = x;
      }
      s.adj[prev].push_back(v);
      s.adj[v].push_back(prev);
      s.edge_count += s.pieces[e];
    }
    for (auto& a : s.adj) std::sort(a.begin(), a.end());
    return s;
  }
};

/// Partition of V into low hop-bounded-diameter components by ball growing
/// on G+.
inline std::vector<VertexSet> region_grow_partition(const Graph& g, double delta,
                                                    const LengthAssignment& lengths) {
  if (!(delta > 0)) throw PreconditionError("region_grow_partition: delta must be positive");
  const int n = g.n();
  const int m = g.m();
  const double w = lengths.total_weight();
  if (n == 0) return {};
  if (m == 0 || w <= 0) return connected_components(g);
  const double log2n = std::log2(static_cast<double>(n));
  if (n == 1 || delta < 8.0 * w * log2n / m) {
    std::vector<VertexSet> singles;
    for (int v = 0; v < n; ++v) singles.push_back({v});
    return singles;
  }
  const double eps = 2.0 * w * std::log(static_cast<double>(n)) / (delta * m);
  const double base = 2.0 * m / n;
  auto gp = SubdividedGraph::build(g, lengths.lengths);

  std::vector<char> remaining(gp.n_total, 1);
  std::vector<char> in_ball(gp.n_total, 0);
  std::vector<VertexSet> comps;
  for (int seed = 0; seed < n; ++seed) {
    if (!remaining[seed]) continue;
    std::vector<int> ball{seed};
    in_ball[seed] = 1;
    std::vector<int> frontier{seed};
    long inside = 0;
    while (true) {
      double c_cur = base + inside;
      std::vector<int> layer;
      long added = 0;
      for (int x : frontier) {
        for (int y : gp.adj[x]) {
          if (remaining[y] && !in_ball[y]) {
            in_ball[y] = 2;  // tentatively in the next layer
            layer.push_back(y);
          }
        }
      }
      for (int y : layer) {
        for (int z : gp.adj[y]) {
          if (!remaining[z]) continue;
          if (in_ball[z] == 1) {
            ++added;
          } else if (in_ball[z] == 2 && z < y) {
            ++added;
          }
        }
      }
      double c_next = base + inside + added;
      if (layer.empty() || c_next < (1 + eps) * c_cur) {
        for (int y : layer) in_ball[y] = 0;
        break;
      }
      for (int y : layer) {
        in_ball[y] = 1;
        ball.push_back(y);
      }
      inside += added;
      frontier = std::move(layer);
    }
    VertexSet comp;
    for (int x : ball) {
      remaining[x] = 0;
      in_ball[x] = 0;
      if (gp.is_original(x)) comp.push_back(x);
    }
    comps.push_back(normalized(std::move(comp)));
  }
  return comps;
}

struct CoreOrCut {
  std::optional<VertexSet> core;
  std::optional<Cut> cut;
};

/// A giant low-diameter core T (|T| >= ceil(2n/3)), or a balanced cut of
/// sparsity below alpha assembled from the region-growing components.
inline CoreOrCut low_diameter_core(const Graph& g, Rational alpha,
                                   const LengthAssignment& lengths) {
  const int n = g.n();
  if (n < 2) throw PreconditionError("low_diameter_core: need n >= 2");
  const double bound = alpha.to_double() /
                       (64.0 * n * std::max(1.0, std::log2(static_cast<double>(n))));
  if (lengths.total_weight() > bound * (1 + 1e-9)) {
    throw PreconditionError("low_diameter_core: W(l) exceeds alpha / (64 n log n)");
  }
  const double delta = 1.0 / (2.0 * n * n);
  auto comps = region_grow_partition(g, delta, lengths);
  const std::size_t giant = (2 * static_cast<std::size_t>(n) + 2) / 3;
  for (auto& c : comps) {
    if (c.size() >= giant) return CoreOrCut{c, std::nullopt};
  }
  std::vector<std::int64_t> sizes;
  for (auto& c : comps) sizes.push_back(static_cast<std::int64_t>(c.size()));
  auto [a, b] = balanced_integer_partition(sizes);
  VertexSet side;
  for (int i : a) side.insert(side.end(), comps[i].begin(), comps[i].end());
  auto cut = cut_of(g, normalized(std::move(side)));
  if (!(cut.sparsity < alpha)) {
    throw ChainError("low_diameter_core: component cut has sparsity " +
                     cut.sparsity.str() + ", not below alpha " + alpha.str());
  }
  return CoreOrCut{std::nullopt, std::move(cut)};
}

struct InfeasibleEvidence {
  double distance_sum = 0;  // sum over v of D^{<=L}(v, T)
  double threshold = 0;     // 4 W(l) / alpha
  std::string reason;
};

struct LayeredCutResult {
  std::optional<Cut> cut;
  std::optional<InfeasibleEvidence> infeasible;
};

/// Grows layers from T on G+ and returns the first layer whose boundary is
/// smaller than alpha times the number of original vertices outside it.
inline LayeredCutResult layered_cut(const Graph& g, Rational alpha,
                                    const LengthAssignment& lengths, int hop_limit,
                                    std::span<const Vertex> t_core) {
  const int n = g.n();
  auto in_t = membership(n, t_core);
  const std::size_t t_size = std::count(in_t.begin(), in_t.end(), 1);
  if (t_size < (2 * static_cast<std::size_t>(n) + 2) / 3) {
    throw PreconditionError("layered_cut: |T| below ceil(2n/3)");
  }
  const double w = lengths.total_weight();
  HopBoundedPaths sp(g, lengths.lengths, t_core, std::max(1, hop_limit));
  double sum = 0;
  for (int v = 0; v < n; ++v) sum += sp.dist(v);
  const double threshold = 4.0 * w / alpha.to_double();
  LayeredCutResult res;
  if (!(sum > threshold)) {
    res.infeasible = InfeasibleEvidence{sum, threshold, "distance sum too small"};
    return res;
  }
  auto gp = SubdividedGraph::build(g, lengths.lengths);
  std::vector<char> in(gp.n_total, 0);
  std::int64_t outside = n;
  for (int v = 0; v < n; ++v) {
    if (in_t[v]) {
      in[v] = 1;
      --outside;
    }
  }
  std::int64_t covered = static_cast<std::int64_t>(t_size);
  while (covered < gp.n_total) {
    std::int64_t c_all = 0, c_orig = 0;
    std::vector<int> nbr_all, nbr_sub;
    for (int x = 0; x < gp.n_total; ++x) {
      if (!in[x]) continue;
      for (int y : gp.adj[x]) {
        if (in[y]) continue;
        ++c_all;
        if (gp.is_original(y)) ++c_orig;
      }
    }
    // C_i < alpha n_i, exactly.
    if (outside > 0 && static_cast<__int128>(c_all) * alpha.den() <
                           static_cast<__int128>(alpha.num()) * outside) {
      VertexSet side;
      for (int v = 0; v < n; ++v) {
        if (in[v]) side.push_back(v);
      }
      auto cut = cut_of(g, side);
      if (!(cut.sparsity < alpha)) {
        throw ChainError("layered_cut: layer cut not sparse (internal)");
      }
      res.cut = std::move(cut);
      return res;
    }
    bool case1 = 2 * c_orig >= c_all;
    std::vector<int> add;
    for (int x = 0; x < gp.n_total; ++x) {
      if (!in[x]) continue;
      for (int y : gp.adj[x]) {
        if (in[y]) continue;
        if (case1 || !gp.is_original(y)) add.push_back(y);
      }
    }
    if (add.empty()) break;
    for (int y : add) {
      if (in[y]) continue;
      in[y] = 1;
      ++covered;
      if (gp.is_original(y)) --outside;
    }
  }
  res.infeasible = InfeasibleEvidence{sum, threshold, "no sparse layer found"};
  return res;
}

/// Dual lengths to a cut of sparsity below alpha, via the low-diameter core
/// and the layered cut on L/4 hops.
inline Cut dual_to_cut(const Graph& g, const RoutingParams& params,
                       const LengthAssignment& dual) {
  double w = dual.total_weight();
  if (!(w > 0)) throw ChainError("dual_to_cut: zero total weight");
  LengthAssignment scaled = dual;
  for (auto& x : scaled.lengths) x *= params.W_star / w;
  auto core = low_diameter_core(g, params.alpha, scaled);
  if (core.cut) return *core.cut;
  int quarter = static_cast<int>(std::max<std::int64_t>(1, params.L / 4));
  quarter = std::min(quarter, std::max(1, g.n() - 1));
  auto layered = layered_cut(g, params.alpha, scaled, quarter, *core.core);
  if (layered.cut) return *layered.cut;
  throw ChainError("dual_to_cut: " + layered.infeasible->reason +
                   " (sum " + std::to_string(layered.infeasible->distance_sum) +
                   ", threshold " + std::to_string(layered.infeasible->threshold) + ")");
}

// ---------------------------------------------------------------------------
// Integral matching routing

struct RouteResult {
  enum class Kind { Paths, SparseCut };
  Kind kind = Kind::Paths;
  std::vector<Path> paths;  // paths[i] runs from pairs[i].first to .second
  std::optional<Cut> cut;
  int max_congestion = 0;
  std::size_t max_hops = 0;
};

namespace detail {

inline const Path& sample_path(const FlowSolution& f, Vertex a, Vertex b, Rng& rng,
                               bool& reversed) {
  const auto& bucket = f.paths(a, b);
  if (bucket.empty()) throw Error("route_matching: pair without flow paths");
  std::vector<double> w;
  w.reserve(bucket.size());
  for (const auto& wp : bucket) w.push_back(wp.value);
  const auto& p = bucket[rng.weighted(w)].path;
  reversed = p.front() != a;
  return p;
}

inline void append_oriented(Path& out, const Path& p, bool reversed) {
  if (!reversed) {
    out.insert(out.end(), p.begin(), p.end());
  } else {
    out.insert(out.end(), p.rbegin(), p.rend());
  }
}

/// Removes cycles from a walk, keeping its endpoints.
inline Path loop_erase(const Path& walk) {
  Path out;
  std::vector<std::pair<Vertex, std::size_t>> pos;
  for (auto v : walk) {
    auto it = std::find_if(pos.begin(), pos.end(),
                           [&](const auto& pv) { return pv.first == v; });
    if (it != pos.end()) {
      std::size_t keep = it->second + 1;
      out.resize(keep);
      pos.erase(std::remove_if(pos.begin(), pos.end(),
                               [&](const auto& pv) { return pv.second >= keep; }),
                pos.end());
      continue;
    }
    pos.emplace_back(v, out.size());
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// Routes each demand pair through a uniformly random intermediate vertex,
/// sampling flow paths proportionally to their value. Throws
/// CongestionExceeded when some vertex carries more than 8 eta paths.
inline RouteResult route_matching_with(const Graph& g, const RoutingParams& params,
                                       const McfResult& mcf, const Matching& demands,
                                       std::uint64_t seed) {
  const int n = g.n();
  std::vector<char> used(n, 0);
  for (auto [u, v] : demands.pairs) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw PreconditionError("route_matching: demand vertex out of range");
    }
    if (used[u] || used[v] || u == v) {
      throw PreconditionError("route_matching: demands are not a matching");
    }
    used[u] = used[v] = 1;
  }
  RouteResult res;
  if (mcf.kind == McfResult::Kind::Dual) {
    res.kind = RouteResult::Kind::SparseCut;
    res.cut = dual_to_cut(g, params, mcf.dual);
    return res;
  }
  const auto& flow = mcf.flow;
  Rng rng(seed);
  std::vector<int> congestion(n, 0);
  for (auto [u, v] : demands.pairs) {
    auto w = static_cast<Vertex>(rng.below(n));
    Path walk;
    bool rev = false;
    if (w == u || w == v) {
      const auto& p = detail::sample_path(flow, u, v, rng, rev);
      detail::append_oriented(walk, p, rev);
    } else {
      const auto& p1 = detail::sample_path(flow, u, w, rng, rev);
      detail::append_oriented(walk, p1, rev);
      walk.pop_back();
      const auto& p2 = detail::sample_path(flow, w, v, rng, rev);
      detail::append_oriented(walk, p2, rev);
    }
    auto path = detail::loop_erase(walk);
    for (auto x : path) ++congestion[x];
    res.max_hops = std::max(res.max_hops, path.size() - 1);
    res.paths.push_back(std::move(path));
  }
  res.max_congestion = congestion.empty()
                           ? 0
                           : *std::max_element(congestion.begin(), congestion.end());
  if (static_cast<std::int64_t>(res.max_hops) > 2 * params.L) {
    throw Error("route_matching: path exceeds 2L hops (internal)");
  }
  if (res.max_congestion > 8 * params.eta) {
    throw CongestionExceeded("route_matching: vertex congestion " +
                             std::to_string(res.max_congestion) + " exceeds 8 eta = " +
                             std::to_string(8 * params.eta));
  }
  return res;
}

inline RouteResult route_matching(const Graph& g, const RoutingParams& params,
                                  const Matching& demands, std::uint64_t seed,
                                  McfOptions opts = {}) {
  auto mcf = solve_uniform_mcf(g, params, opts);
  return route_matching_with(g, params, mcf, demands, seed);
}

}  // namespace expminor
