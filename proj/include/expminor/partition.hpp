#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "expminor/graph.hpp"
#include "expminor/spectral.hpp"

namespace expminor {

struct GroupingError : Error {
  using Error::Error;
};

/// Split of indices into two sides, each carrying at least a quarter of the
/// total when no single value exceeds three quarters of it.
inline std::pair<std::vector<int>, std::vector<int>> balanced_integer_partition(
    const std::vector<std::int64_t>& xs) {
  std::int64_t total = 0;
  for (auto x : xs) {
    if (x < 0) throw PreconditionError("balanced_integer_partition: negative value");
    total += x;
  }
  if (total <= 0) throw PreconditionError("balanced_integer_partition: zero total");
  for (auto x : xs) {
    if (4 * x > 3 * total) {
      throw PreconditionError(
          "balanced_integer_partition: value " + std::to_string(x) +
          " exceeds 3/4 of the total " + std::to_string(total));
    }
  }
  std::vector<int> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return xs[a] > xs[b]; });
  std::vector<int> a, b;
  std::int64_t sa = 0, sb = 0;
  for (int i : order) {
    if (sa <= sb) {
      a.push_back(i);
      sa += xs[i];
    } else {
      b.push_back(i);
      sb += xs[i];
    }
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return {a, b};
}

struct Grouping {
  std::vector<VertexSet> parts;
  std::vector<int> terminals_per_part;
  /// Terminal threshold actually used when cutting the tree.
  int threshold = 0;
};

namespace detail {

/// BFS spanning tree from vertex 0, re-rooted at its lowest-index leaf.
/// Returns the vertices in DFS post-order (children visited by index) and
/// the parent array (-1 at the root).
struct RootedTree {
  std::vector<Vertex> post_order;
  std::vector<Vertex> parent;
  Vertex root = 0;
};

inline RootedTree rooted_spanning_tree(const Graph& g) {
  const int n = g.n();
  std::vector<Vertex> bfs_parent(n, -1);
  std::vector<char> seen(n, 0);
  std::vector<Vertex> queue{0};
  seen[0] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    auto v = queue[i];
    for (auto w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        bfs_parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  std::vector<std::vector<Vertex>> tree_adj(n);
  for (int v = 0; v < n; ++v) {
    if (bfs_parent[v] >= 0) {
      tree_adj[v].push_back(bfs_parent[v]);
      tree_adj[bfs_parent[v]].push_back(v);
    }
  }
  for (auto& a : tree_adj) std::sort(a.begin(), a.end());

  RootedTree t;
  t.root = 0;
  for (int v = 0; v < n; ++v) {
    if (tree_adj[v].size() <= 1) {
      t.root = v;
      break;
    }
  }
  t.parent.assign(n, -1);
  // Iterative DFS producing post-order.
  std::vector<std::pair<Vertex, std::size_t>> stack{{t.root, 0}};
  std::vector<char> visited(n, 0);
  visited[t.root] = 1;
  while (!stack.empty()) {
    auto& [v, idx] = stack.back();
    if (idx < tree_adj[v].size()) {
      auto w = tree_adj[v][idx++];
      if (!visited[w]) {
        visited[w] = 1;
        t.parent[w] = v;
        stack.emplace_back(w, 0);
      }
    } else {
      t.post_order.push_back(v);
      stack.pop_back();
    }
  }
  return t;
}

/// Cuts residual subtrees holding >= threshold terminals in post-order.
inline std::vector<VertexSet> cut_tree(const Graph& g, const RootedTree& t,
                                       const std::vector<char>& is_terminal,
                                       int threshold,
                                       std::vector<int>& counts) {
  const int n = g.n();
  std::vector<int> residual(n, 0);
  std::vector<std::vector<Vertex>> children(n);
  for (auto v : t.post_order) {
    if (t.parent[v] >= 0) children[t.parent[v]].push_back(v);
  }
  std::vector<char> removed(n, 0);
  std::vector<VertexSet> parts;
  counts.clear();
  for (auto v : t.post_order) {
    int c = is_terminal[v];
    for (auto w : children[v]) {
      if (!removed[w]) c += residual[w];
    }
    residual[v] = c;
    if (c >= threshold) {
      VertexSet part;
      std::vector<Vertex> stack{v};
      while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        part.push_back(x);
        for (auto w : children[x]) {
          if (!removed[w]) stack.push_back(w);
        }
      }
      for (auto x : part) removed[x] = 1;
      parts.push_back(normalized(std::move(part)));
      counts.push_back(c);
    }
  }
  return parts;
}

}  // namespace detail

/// r disjoint connected parts of g, each holding at least
/// floor(|R| / (d r)) terminals of R.
///
/// Cuts a rooted spanning tree bottom-up. The threshold starts at
/// floor(|R| / r) and is lowered until r parts come out, so the guaranteed
/// floor(|R| / (d r)) is the last value tried.
inline Grouping spanning_tree_grouping(const Graph& g,
                                       std::span<const Vertex> terminals,
                                       int r) {
  if (r < 1) throw PreconditionError("spanning_tree_grouping: r must be >= 1");
  auto is_terminal = membership(g.n(), terminals);
  int num_terminals = 0;
  for (char c : is_terminal) num_terminals += c;
  if (num_terminals < r) {
    throw PreconditionError("spanning_tree_grouping: fewer terminals than parts");
  }
  if (!is_connected(g)) {
    throw PreconditionError("spanning_tree_grouping: graph is disconnected");
  }
  const int d = std::max(1, g.max_degree());
  const int guaranteed = num_terminals / (d * r);
  auto tree = detail::rooted_spanning_tree(g);
  for (int t = num_terminals / r; t >= guaranteed; --t) {
    std::vector<int> counts;
    auto parts = detail::cut_tree(g, tree, is_terminal, t, counts);
    if (static_cast<int>(parts.size()) >= r) {
      parts.resize(r);
      counts.resize(r);
      return Grouping{std::move(parts), std::move(counts), t};
    }
  }
  throw GroupingError("spanning_tree_grouping: could not extract " +
                      std::to_string(r) + " parts");
}

/// Initial good partition: two connected parts from the tree grouping, with
/// every leftover component merged into an adjacent part (the smaller one
/// when both qualify). Returned with |first| >= |second|.
inline std::pair<VertexSet, VertexSet> good_partition_init(const Graph& g) {
  if (g.n() < 2) throw PreconditionError("good_partition_init: need n >= 2");
  auto grouping = spanning_tree_grouping(g, all_vertices(g.n()), 2);
  std::vector<int> side(g.n(), -1);
  VertexSet parts[2] = {grouping.parts[0], grouping.parts[1]};
  for (int p = 0; p < 2; ++p) {
    for (auto v : parts[p]) side[v] = p;
  }
  VertexSet rest;
  for (int v = 0; v < g.n(); ++v) {
    if (side[v] < 0) rest.push_back(v);
  }
  auto pending = rest.empty() ? std::vector<VertexSet>{}
                              : components_within(g, rest);
  // A component may only touch the other leftovers; sweep until all placed.
  while (!pending.empty()) {
    std::vector<VertexSet> next;
    for (auto& comp : pending) {
      bool touches[2] = {false, false};
      for (auto v : comp) {
        for (auto w : g.neighbors(v)) {
          if (side[w] >= 0) touches[side[w]] = true;
        }
      }
      int target = -1;
      if (touches[0] && touches[1]) {
        target = parts[1].size() < parts[0].size() ? 1 : 0;
      } else if (touches[0]) {
        target = 0;
      } else if (touches[1]) {
        target = 1;
      }
      if (target < 0) {
        next.push_back(std::move(comp));
        continue;
      }
      for (auto v : comp) {
        side[v] = target;
        parts[target].push_back(v);
      }
    }
    if (next.size() == pending.size()) {
      throw PreconditionError("good_partition_init: graph is disconnected");
    }
    pending = std::move(next);
  }
  auto a = normalized(std::move(parts[0]));
  auto b = normalized(std::move(parts[1]));
  if (a.size() < b.size()) std::swap(a, b);
  return {a, b};
}

/// Moves components between the sides until both induce connected graphs,
/// never increasing the sparsity.
inline Cut connected_cut_repair(const Graph& g, const Cut& cut) {
  if (!is_connected(g)) {
    throw PreconditionError("connected_cut_repair: graph is disconnected");
  }
  const int n = g.n();
  auto in_a = membership(n, cut.side_a);
  for (int iter = 0; iter <= n; ++iter) {
    VertexSet a, b;
    for (int v = 0; v < n; ++v) (in_a[v] ? a : b).push_back(v);
    auto comps_a = components_within(g, a);
    auto comps_b = components_within(g, b);
    if (comps_a.size() == 1 && comps_b.size() == 1) return cut_of(g, a);

    // x is the smaller side (side_a on ties).
    bool a_is_x = a.size() <= b.size();
    auto& x_comps = a_is_x ? comps_a : comps_b;
    auto& y_comps = a_is_x ? comps_b : comps_a;
    const std::int64_t cross = crossing_count(g, in_a);
    const std::int64_t size_x = a_is_x ? a.size() : b.size();
    const std::int64_t size_y = n - size_x;

    auto edges_out = [&](const VertexSet& comp) {
      std::int64_t c = 0;
      for (auto v : comp) {
        for (auto w : g.neighbors(v)) c += (in_a[w] != in_a[v]);
      }
      return c;
    };
    // Component C with |E(C, other side)| / |C| >= |E(X,Y)| / |own side|.
    auto pick = [&](const std::vector<VertexSet>& comps,
                    std::int64_t own) -> const VertexSet& {
      for (auto& c : comps) {
        if (edges_out(c) * own >= cross * static_cast<std::int64_t>(c.size())) {
          return c;
        }
      }
      throw Error("connected_cut_repair: no qualifying component (internal)");
    };
    const VertexSet& moved =
        x_comps.size() > 1 ? pick(x_comps, size_x) : pick(y_comps, size_y);
    for (auto v : moved) in_a[v] = !in_a[v];
  }
  throw Error("connected_cut_repair: did not converge (internal)");
}

struct ExpanderRepairResult {
  VertexSet vertices;
  /// Sparsity of the final sweep cut, absent when fewer than 2 vertices remain.
  std::optional<Rational> certificate;
  int rounds = 0;
};

/// Repeatedly drops the smaller side of a sweep cut sparser than alpha/4 from
/// g minus the deleted edges.
inline ExpanderRepairResult expander_repair(const Graph& g, Rational alpha,
                                            std::span<const Edge> deleted,
                                            SpectralOptions opts = {}) {
  if (g.n() == 0) throw PreconditionError("expander_repair: empty graph");
  const Graph h = without_edges(g, deleted);
  const Rational bar = alpha / Rational(4);
  ExpanderRepairResult res;
  res.vertices = all_vertices(g.n());
  while (true) {
    if (res.vertices.size() < 2) {
      if (res.vertices.empty()) {
        throw Error("expander_repair: empty remainder; the expansion claim is false");
      }
      return res;
    }
    auto sub = induced_subgraph(h, res.vertices);
    auto comps = connected_components(sub.graph);
    if (comps.size() > 1) {
      auto largest = std::max_element(
          comps.begin(), comps.end(),
          [](const VertexSet& x, const VertexSet& y) { return x.size() < y.size(); });
      res.vertices = sub.lift(*largest);
      ++res.rounds;
      continue;
    }
    auto cut = sweep_cut(sub.graph, opts);
    if (cut.sparsity < bar) {
      const auto& keep =
          cut.side_a.size() >= cut.side_b.size() ? cut.side_a : cut.side_b;
      res.vertices = sub.lift(keep);
      ++res.rounds;
      continue;
    }
    res.certificate = cut.sparsity;
    return res;
  }
}

}  // namespace expminor
