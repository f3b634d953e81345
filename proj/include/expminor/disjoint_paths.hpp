#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "expminor/flow_routing.hpp"

namespace expminor {

struct ResampleCapExceeded : RetryableError {
  using RetryableError::RetryableError;
};

/// Candidate paths, one list per group.
struct PathGroups {
  std::vector<std::vector<Path>> groups;
};

struct LllResult {
  std::vector<Path> paths;  // one per group
  long resamples = 0;
  /// e p (D + 1) <= 1 with p = 1/q^2 and D = 2 q L_max eta_max.
  bool condition_holds = false;
  double condition_value = 0;
};

inline bool paths_pairwise_disjoint(const std::vector<Path>& paths) {
  std::vector<std::pair<Vertex, std::size_t>> occ;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (auto v : paths[i]) occ.emplace_back(v, i);
  }
  std::sort(occ.begin(), occ.end());
  for (std::size_t k = 1; k < occ.size(); ++k) {
    if (occ[k].first == occ[k - 1].first && occ[k].second != occ[k - 1].second) {
      return false;
    }
  }
  return true;
}

/// LLL quantity e p (D + 1) for the given groups.
inline double lll_condition_value(const PathGroups& pg) {
  std::size_t q = std::numeric_limits<std::size_t>::max();
  std::size_t len = 0;
  std::vector<std::pair<Vertex, int>> occ;
  for (const auto& grp : pg.groups) {
    q = std::min(q, grp.size());
    for (const auto& p : grp) {
      len = std::max(len, p.size());
      for (auto v : p) occ.emplace_back(v, 0);
    }
  }
  if (pg.groups.empty() || q == 0) return 0;
  std::sort(occ.begin(), occ.end());
  std::size_t eta = 0;
  for (std::size_t i = 0; i < occ.size();) {
    std::size_t j = i;
    while (j < occ.size() && occ[j].first == occ[i].first) ++j;
    eta = std::max(eta, j - i);
    i = j;
  }
  double p = 1.0 / (static_cast<double>(q) * q);
  double d = 2.0 * q * len * eta;
  return std::numbers::e * p * (d + 1);
}

/// Moser-Tardos resampling: pick one path per group uniformly, then while
/// two chosen paths from different groups intersect, redraw both groups,
/// always fixing the lexicographically smallest intersecting group pair.
inline LllResult lll_select_disjoint(const PathGroups& pg, std::uint64_t seed,
                                     long resample_cap) {
  const std::size_t r = pg.groups.size();
  for (const auto& grp : pg.groups) {
    if (grp.empty()) throw PreconditionError("lll_select_disjoint: empty group");
  }
  LllResult res;
  res.condition_value = lll_condition_value(pg);
  res.condition_holds = res.condition_value <= 1.0;
  Rng rng(seed);
  std::vector<std::size_t> choice(r);
  for (std::size_t j = 0; j < r; ++j) choice[j] = rng.below(pg.groups[j].size());

  Vertex max_v = 0;
  for (const auto& grp : pg.groups) {
    for (const auto& p : grp) {
      for (auto v : p) max_v = std::max(max_v, v);
    }
  }
  std::vector<int> owner(static_cast<std::size_t>(max_v) + 1);
  while (true) {
    std::fill(owner.begin(), owner.end(), -1);
    for (std::size_t j = 0; j < r; ++j) {
      for (auto v : pg.groups[j][choice[j]]) {
        if (owner[v] < 0) owner[v] = static_cast<int>(j);
      }
    }
    std::optional<std::pair<std::size_t, std::size_t>> bad;
    for (std::size_t j = 0; j < r; ++j) {
      int lowest = -1;
      for (auto v : pg.groups[j][choice[j]]) {
        if (owner[v] >= 0 && static_cast<std::size_t>(owner[v]) < j &&
            (lowest < 0 || owner[v] < lowest)) {
          lowest = owner[v];
        }
      }
      if (lowest >= 0) {
        std::pair<std::size_t, std::size_t> cand{static_cast<std::size_t>(lowest), j};
        if (!bad || cand < *bad) bad = cand;
      }
    }
    if (!bad) break;
    auto [a, b] = *bad;
    if (pg.groups[a].size() == 1 && pg.groups[b].size() == 1) {
      throw ResampleCapExceeded("lll_select_disjoint: groups " + std::to_string(a) +
                                " and " + std::to_string(b) +
                                " have single intersecting candidates");
    }
    if (res.resamples >= resample_cap) {
      throw ResampleCapExceeded("lll_select_disjoint: resample cap " +
                                std::to_string(resample_cap) + " reached");
    }
    ++res.resamples;
    choice[a] = rng.below(pg.groups[a].size());
    choice[b] = rng.below(pg.groups[b].size());
  }
  for (std::size_t j = 0; j < r; ++j) res.paths.push_back(pg.groups[j][choice[j]]);
  if (!paths_pairwise_disjoint(res.paths)) {
    throw Error("lll_select_disjoint: selected paths intersect (internal)");
  }
  return res;
}

inline long default_resample_cap(std::size_t r, std::size_t q) {
  return static_cast<long>(1000 * std::max<std::size_t>(1, r) * std::max<std::size_t>(1, q));
}

struct GroupRouteResult {
  enum class Kind { Paths, SparseCut };
  Kind kind = Kind::Paths;
  std::vector<Path> paths;  // paths[j] runs from family[j] to family[j + r]
  std::optional<Cut> cut;
  long resamples = 0;
  bool lll_condition_holds = false;
  int max_congestion = 0;
};

/// Pairs the k-th smallest vertex of family[j] with the k-th smallest of
/// family[j + r], routes that matching, and picks one disjoint path per j.
inline GroupRouteResult route_group_family_with(
    const Graph& g, const RoutingParams& params, const McfResult& mcf,
    const std::vector<VertexSet>& family, std::uint64_t seed, long resample_cap = 0) {
  if (family.empty() || family.size() % 2 != 0) {
    throw PreconditionError("route_group_family: family must hold 2r sets");
  }
  const std::size_t r = family.size() / 2;
  const std::size_t q = family[0].size();
  std::vector<char> seen(g.n(), 0);
  for (const auto& set : family) {
    if (set.size() != q) {
      throw PreconditionError("route_group_family: sets differ in size");
    }
    for (auto v : set) {
      if (v < 0 || v >= g.n()) throw PreconditionError("route_group_family: vertex out of range");
      if (seen[v]) throw PreconditionError("route_group_family: sets are not disjoint");
      seen[v] = 1;
    }
  }
  if (q == 0) throw PreconditionError("route_group_family: empty sets");
  Matching demands;
  for (std::size_t j = 0; j < r; ++j) {
    auto a = normalized(family[j]);
    auto b = normalized(family[j + r]);
    for (std::size_t k = 0; k < q; ++k) demands.pairs.emplace_back(a[k], b[k]);
  }
  auto routed = route_matching_with(g, params, mcf, demands, derive_seed(seed, 0));
  GroupRouteResult res;
  if (routed.kind == RouteResult::Kind::SparseCut) {
    res.kind = GroupRouteResult::Kind::SparseCut;
    res.cut = std::move(routed.cut);
    return res;
  }
  res.max_congestion = routed.max_congestion;
  PathGroups pg;
  pg.groups.resize(r);
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t k = 0; k < q; ++k) {
      pg.groups[j].push_back(std::move(routed.paths[j * q + k]));
    }
  }
  if (resample_cap <= 0) resample_cap = default_resample_cap(r, q);
  auto lll = lll_select_disjoint(pg, derive_seed(seed, 1), resample_cap);
  res.paths = std::move(lll.paths);
  res.resamples = lll.resamples;
  res.lll_condition_holds = lll.condition_holds;
  return res;
}

inline GroupRouteResult route_group_family(const Graph& g, const RoutingParams& params,
                                           const std::vector<VertexSet>& family,
                                           std::uint64_t seed, long resample_cap = 0,
                                           McfOptions opts = {}) {
  auto mcf = solve_uniform_mcf(g, params, opts);
  return route_group_family_with(g, params, mcf, family, seed, resample_cap);
}

/// Set size q = ceil(c d^2 log2^2 n / alpha^2).
inline std::int64_t family_set_size(int n, int d, Rational alpha, double c = 1) {
  long double l = std::max(1.0L, std::log2(static_cast<long double>(std::max(1, n))));
  long double a = alpha.to_long_double();
  return static_cast<std::int64_t>(std::ceil(c * d * d * l * l / (a * a)));
}

}  // namespace expminor
