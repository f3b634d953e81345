#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "expminor/graph.hpp"
#include "expminor/rng.hpp"

namespace expminor {

struct GeneratorError : Error {
  using Error::Error;
};

enum class GenKind {
  RandomRegular,
  Gnp,
  Cycle,
  Path,
  Grid,
  Clique,
  Barbell,
  TwoExpandersBridge,
  Hypercube,
  Petersen,
};

struct GenSpec {
  GenKind kind = GenKind::Cycle;
  int n = 0;
  int d = 0;
  double p = 0;
  int a = 0;
  int b = 0;
  int k = 0;
  int dim = 0;
  std::uint64_t seed = 0;
};

inline const char* gen_kind_name(GenKind k) {
  switch (k) {
    case GenKind::RandomRegular: return "random-regular";
    case GenKind::Gnp: return "gnp";
    case GenKind::Cycle: return "cycle";
    case GenKind::Path: return "path";
    case GenKind::Grid: return "grid";
    case GenKind::Clique: return "clique";
    case GenKind::Barbell: return "barbell";
    case GenKind::TwoExpandersBridge: return "two-expanders-bridge";
    case GenKind::Hypercube: return "hypercube";
    case GenKind::Petersen: return "petersen";
  }
  return "?";
}

inline GenKind parse_gen_kind(const std::string& s) {
  for (auto k : {GenKind::RandomRegular, GenKind::Gnp, GenKind::Cycle, GenKind::Path,
                 GenKind::Grid, GenKind::Clique, GenKind::Barbell,
                 GenKind::TwoExpandersBridge, GenKind::Hypercube, GenKind::Petersen}) {
    if (s == gen_kind_name(k)) return k;
  }
  throw GeneratorError("unknown graph kind '" + s + "'");
}

inline constexpr int kRegularRejectionCap = 10000;

/// Configuration model: shuffle n*d half-edges, pair neighbours, reject
/// draws with loops or parallel edges (and, for d >= 3, disconnected draws).
inline Graph random_regular(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 0 || d >= n) throw GeneratorError("random-regular: need 0 <= d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0) {
    throw GeneratorError("random-regular: n * d must be even");
  }
  Rng rng(seed);
  std::vector<int> points;
  points.reserve(static_cast<std::size_t>(n) * d);
  for (int attempt = 0; attempt < kRegularRejectionCap; ++attempt) {
    points.clear();
    for (int v = 0; v < n; ++v) {
      for (int i = 0; i < d; ++i) points.push_back(v);
    }
    rng.shuffle(points);
    std::set<Edge> edges;
    bool ok = true;
    for (std::size_t i = 0; i < points.size(); i += 2) {
      int u = points[i], v = points[i + 1];
      if (u == v) {
        ok = false;
        break;
      }
      if (u > v) std::swap(u, v);
      if (!edges.insert({u, v}).second) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    Graph g(n, std::vector<Edge>(edges.begin(), edges.end()));
    if (d >= 3 && !is_connected(g)) continue;
    for (int v = 0; v < n; ++v) {
      if (g.degree(v) != d) throw GeneratorError("random-regular: degree check failed");
    }
    return g;
  }
  throw GeneratorError("random-regular: rejection cap exceeded");
}

inline Graph cycle_graph(int n) {
  if (n < 3) throw GeneratorError("cycle: need n >= 3");
  std::vector<Edge> e;
  for (int v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
  return Graph(n, e);
}

inline Graph path_graph(int n) {
  if (n < 1) throw GeneratorError("path: need n >= 1");
  std::vector<Edge> e;
  for (int v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return Graph(n, e);
}

inline Graph grid_graph(int a, int b) {
  if (a < 1 || b < 1) throw GeneratorError("grid: need a, b >= 1");
  std::vector<Edge> e;
  for (int r = 0; r < a; ++r) {
    for (int c = 0; c < b; ++c) {
      int v = r * b + c;
      if (c + 1 < b) e.emplace_back(v, v + 1);
      if (r + 1 < a) e.emplace_back(v, v + b);
    }
  }
  return Graph(a * b, e);
}

inline Graph clique_graph(int n) {
  if (n < 1) throw GeneratorError("clique: need n >= 1");
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  }
  return Graph(n, e);
}

/// Two copies of K_k joined by the edge (k-1, k).
inline Graph barbell_graph(int k) {
  if (k < 1) throw GeneratorError("barbell: need k >= 1");
  std::vector<Edge> e;
  for (int side = 0; side < 2; ++side) {
    for (int u = 0; u < k; ++u) {
      for (int v = u + 1; v < k; ++v) e.emplace_back(side * k + u, side * k + v);
    }
  }
  e.emplace_back(k - 1, k);
  return Graph(2 * k, e);
}

/// Two independent random d-regular graphs on n vertices each, plus the
/// bridge (0, n).
inline Graph two_expanders_bridge(int n, int d, std::uint64_t seed) {
  auto left = random_regular(n, d, derive_seed(seed, 0));
  auto right = random_regular(n, d, derive_seed(seed, 1));
  std::vector<Edge> e = left.edges();
  for (auto [u, v] : right.edges()) e.emplace_back(u + n, v + n);
  e.emplace_back(0, n);
  return Graph(2 * n, e);
}

inline Graph gnp_graph(int n, double p, std::uint64_t seed) {
  if (n < 1 || p < 0 || p > 1) throw GeneratorError("gnp: need n >= 1 and p in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) e.emplace_back(u, v);
    }
  }
  return Graph(n, e);
}

inline Graph hypercube_graph(int dim) {
  if (dim < 0 || dim > 20) throw GeneratorError("hypercube: need 0 <= dim <= 20");
  int n = 1 << dim;
  std::vector<Edge> e;
  for (int v = 0; v < n; ++v) {
    for (int b = 0; b < dim; ++b) {
      int w = v ^ (1 << b);
      if (v < w) e.emplace_back(v, w);
    }
  }
  return Graph(n, e);
}

/// Outer 5-cycle 0..4, inner pentagram 5..9, spokes (i, i+5).
inline Graph petersen_graph() {
  std::vector<Edge> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
    e.emplace_back(i, i + 5);
  }
  return Graph(10, e);
}

inline Graph generate(const GenSpec& s) {
  switch (s.kind) {
    case GenKind::RandomRegular: return random_regular(s.n, s.d, s.seed);
    case GenKind::Gnp: return gnp_graph(s.n, s.p, s.seed);
    case GenKind::Cycle: return cycle_graph(s.n);
    case GenKind::Path: return path_graph(s.n);
    case GenKind::Grid: return grid_graph(s.a, s.b);
    case GenKind::Clique: return clique_graph(s.n);
    case GenKind::Barbell: return barbell_graph(s.k);
    case GenKind::TwoExpandersBridge: return two_expanders_bridge(s.n, s.d, s.seed);
    case GenKind::Hypercube: return hypercube_graph(s.dim);
    case GenKind::Petersen: return petersen_graph();
  }
  throw GeneratorError("unknown generator kind");
}

}  // namespace expminor
