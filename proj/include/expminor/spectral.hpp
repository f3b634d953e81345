#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "expminor/graph.hpp"
#include "expminor/rng.hpp"

namespace expminor {

struct DisconnectedGraphError : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  using Error::Error;
};

struct SpectralOptions {
  double tol = 1e-8;
  long max_iterations = 100000;
  /// Re-orthogonalize against the all-ones vector every this many steps.
  int reorthogonalize_every = 1;
  int check_every = 16;
};

struct SpectralResult {
  double lambda2 = 0;
  std::vector<double> fiedler;  // unit norm, orthogonal to all-ones
  double residual = 0;          // |L f - lambda2 f|_2
  long iterations = 0;
};

namespace detail {

inline void laplacian_apply(const Graph& g, const std::vector<double>& x,
                            std::vector<double>& out) {
  for (int v = 0; v < g.n(); ++v) {
    double s = g.degree(v) * x[v];
    for (auto w : g.neighbors(v)) s -= x[w];
    out[v] = s;
  }
}

inline void remove_mean(std::vector<double>& x) {
  double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  for (auto& v : x) v -= mean;
}

inline double norm2(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace detail

/// Second-smallest Laplacian eigenvalue and a matching eigenvector.
///
/// Power iteration on ((2d + 1) I - L) restricted to the complement of the
/// all-ones vector, where d is the maximum degree (2d bounds the Laplacian
/// spectrum, so the shifted operator is positive definite there).
/// Converged when |L f - lambda f| <= tol |f|.
inline SpectralResult lambda2(const Graph& g, SpectralOptions opts = {}) {
  const int n = g.n();
  if (n < 2) throw PreconditionError("lambda2: graph needs at least 2 vertices");
  if (!(opts.tol > 0)) throw PreconditionError("lambda2: tol must be positive");
  if (!is_connected(g)) {
    throw DisconnectedGraphError("lambda2: graph is disconnected");
  }
  const double shift = 2.0 * g.max_degree() + 1.0;

  std::vector<double> x(n), lx(n);
  Rng rng(0x5eed5eedULL);
  for (auto& v : x) v = rng.uniform() - 0.5;
  detail::remove_mean(x);
  double nx = detail::norm2(x);
  for (auto& v : x) v /= nx;

  SpectralResult res;
  for (long it = 1; it <= opts.max_iterations; ++it) {
    detail::laplacian_apply(g, x, lx);
    for (int v = 0; v < n; ++v) lx[v] = shift * x[v] - lx[v];
    if (it % opts.reorthogonalize_every == 0) detail::remove_mean(lx);
    double nrm = detail::norm2(lx);
    for (int v = 0; v < n; ++v) x[v] = lx[v] / nrm;

    if (it % opts.check_every == 0 || it == opts.max_iterations) {
      detail::laplacian_apply(g, x, lx);
      double lambda = 0;
      for (int v = 0; v < n; ++v) lambda += x[v] * lx[v];
      double r = 0;
      for (int v = 0; v < n; ++v) {
        double d = lx[v] - lambda * x[v];
        r += d * d;
      }
      r = std::sqrt(r);
      if (r <= opts.tol) {
        res.lambda2 = std::max(0.0, lambda);
        res.fiedler = x;
        res.residual = r;
        res.iterations = it;
        return res;
      }
    }
  }
  throw ConvergenceError("lambda2: no convergence within " +
                         std::to_string(opts.max_iterations) + " iterations");
}

/// Best prefix cut of the vertices sorted by (fiedler value, index).
inline Cut sweep_cut_from(const Graph& g, const std::vector<double>& fiedler) {
  const int n = g.n();
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return fiedler[a] < fiedler[b];
  });
  std::vector<char> in(n, 0);
  long crossing = 0;
  int best_k = 1;
  Rational best(0);
  bool have = false;
  for (int k = 1; k < n; ++k) {
    auto v = order[k - 1];
    int inside = 0;
    for (auto w : g.neighbors(v)) inside += in[w];
    crossing += g.degree(v) - 2 * inside;
    in[v] = 1;
    Rational s(crossing, std::min(k, n - k));
    if (!have || s < best) {
      best = s;
      best_k = k;
      have = true;
    }
  }
  VertexSet a(order.begin(), order.begin() + best_k);
  return cut_of(g, normalized(std::move(a)));
}

/// Cheeger rounding of the Fiedler vector.
inline Cut sweep_cut(const Graph& g, SpectralOptions opts = {}) {
  auto spec = lambda2(g, opts);
  return sweep_cut_from(g, spec.fiedler);
}

struct ExpansionResult {
  Rational phi;
  Cut witness;
};

inline constexpr int kExactExpansionMaxN = 22;

/// Minimum sparsity over all 2^(n-1) - 1 cuts, by Gray-code enumeration.
inline ExpansionResult exact_expansion(const Graph& g) {
  const int n = g.n();
  if (n < 2) throw PreconditionError("exact_expansion: need at least 2 vertices");
  if (n > kExactExpansionMaxN) {
    throw PreconditionError("exact_expansion: n = " + std::to_string(n) +
                            " exceeds the exhaustive budget of " +
                            std::to_string(kExactExpansionMaxN));
  }
  std::vector<std::uint32_t> adj(n, 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
  // Vertex n-1 stays on side B; A ranges over non-empty subsets of 0..n-2.
  const std::uint64_t total = 1ULL << (n - 1);
  std::uint32_t a = 0;
  long crossing = 0;
  bool have = false;
  std::int64_t best_num = 0, best_den = 1;
  std::uint32_t best_set = 0;
  for (std::uint64_t i = 1; i < total; ++i) {
    int v = std::countr_zero(i);
    int deg = g.degree(v);
    int in_a = std::popcount(adj[v] & a);
    if (a & (1u << v)) {
      crossing += 2 * in_a - deg;
    } else {
      crossing += deg - 2 * in_a;
    }
    a ^= 1u << v;
    int size_a = std::popcount(a);
    std::int64_t den = std::min(size_a, n - size_a);
    if (!have || crossing * best_den < best_num * den) {
      best_num = crossing;
      best_den = den;
      best_set = a;
      have = true;
    }
  }
  VertexSet side;
  for (int v = 0; v < n; ++v) {
    if (best_set & (1u << v)) side.push_back(v);
  }
  ExpansionResult res;
  res.witness = cut_of(g, side);
  res.phi = res.witness.sparsity;
  return res;
}

}  // namespace expminor
