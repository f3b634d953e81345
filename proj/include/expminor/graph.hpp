#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "expminor/rational.hpp"

namespace expminor {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;
/// Sorted, duplicate-free list of vertex indices.
using VertexSet = std::vector<Vertex>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphFormatError : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

/// Immutable simple undirected graph on vertices 0..n-1.
///
/// Edges are numbered 0..m-1 in lexicographic order of (u, v) with u < v.
/// Adjacency is stored in CSR form; neighbors(v) is sorted ascending and
/// incident_edges(v)[i] is the id of the edge to neighbors(v)[i].
class Graph {
 public:
  Graph() = default;

  /// Throws GraphFormatError on self-loops, duplicate edges or bad indices.
  Graph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 0) throw GraphFormatError("negative vertex count");
    for (auto& [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n) {
        throw GraphFormatError("vertex index out of range in edge (" +
                               std::to_string(u) + ", " + std::to_string(v) +
                               ")");
      }
      if (u == v) {
        throw GraphFormatError("self-loop at vertex " + std::to_string(u));
      }
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (edges[i] == edges[i - 1]) {
        throw GraphFormatError("duplicate edge (" +
                               std::to_string(edges[i].first) + ", " +
                               std::to_string(edges[i].second) + ")");
      }
    }
    edges_ = std::move(edges);
    std::vector<int> deg(n_, 0);
    for (auto [u, v] : edges_) {
      ++deg[u];
      ++deg[v];
    }
    offsets_.assign(n_ + 1, 0);
    for (int v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
    adj_.resize(offsets_[n_]);
    adj_edge_.resize(offsets_[n_]);
    std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
    for (int id = 0; id < static_cast<int>(edges_.size()); ++id) {
      auto [u, v] = edges_[id];
      adj_[fill[u]] = v;
      adj_edge_[fill[u]++] = id;
      adj_[fill[v]] = u;
      adj_edge_[fill[v]++] = id;
    }
    // Edges are lexicographic, so lists for u are filled in increasing v for
    // v > u, but neighbors below u arrive interleaved; sort each list.
    for (int v = 0; v < n_; ++v) {
      std::vector<std::pair<int, int>> tmp;
      for (int i = offsets_[v]; i < offsets_[v + 1]; ++i) {
        tmp.emplace_back(adj_[i], adj_edge_[i]);
      }
      std::sort(tmp.begin(), tmp.end());
      for (int i = offsets_[v]; i < offsets_[v + 1]; ++i) {
        adj_[i] = tmp[i - offsets_[v]].first;
        adj_edge_[i] = tmp[i - offsets_[v]].second;
      }
    }
  }

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  /// n + m.
  int size() const { return n_ + m(); }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::span<const int> incident_edges(Vertex v) const {
    return {adj_edge_.data() + offsets_[v], adj_edge_.data() + offsets_[v + 1]};
  }
  int degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  int max_degree() const {
    int d = 0;
    for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
    return d;
  }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[id]; }

  std::optional<int> edge_id(Vertex u, Vertex v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) return std::nullopt;
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return std::nullopt;
    return incident_edges(u)[it - nb.begin()];
  }
  bool has_edge(Vertex u, Vertex v) const { return edge_id(u, v).has_value(); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> offsets_{0};
  std::vector<Vertex> adj_;
  std::vector<int> adj_edge_;
};

/// Bipartition (side_a, side_b) of V(g) with its crossing edges and exact
/// sparsity |E(A,B)| / min(|A|, |B|).
struct Cut {
  VertexSet side_a;
  VertexSet side_b;
  std::vector<Edge> crossing_edges;
  Rational sparsity;

  std::size_t min_side() const {
    return std::min(side_a.size(), side_b.size());
  }
};

struct Matching {
  std::vector<Edge> pairs;
  std::size_t size() const { return pairs.size(); }
};

// ---------------------------------------------------------------------------
// Vertex-set helpers

inline VertexSet normalized(VertexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline std::vector<char> membership(int n, std::span<const Vertex> s) {
  std::vector<char> in(n, 0);
  for (auto v : s) {
    if (v < 0 || v >= n) {
      throw PreconditionError("vertex " + std::to_string(v) +
                              " out of range [0, " + std::to_string(n) + ")");
    }
    in[v] = 1;
  }
  return in;
}

inline VertexSet complement(int n, std::span<const Vertex> s) {
  auto in = membership(n, s);
  VertexSet out;
  for (int v = 0; v < n; ++v) {
    if (!in[v]) out.push_back(v);
  }
  return out;
}

inline VertexSet all_vertices(int n) {
  VertexSet out(n);
  for (int v = 0; v < n; ++v) out[v] = v;
  return out;
}

// ---------------------------------------------------------------------------
// Connectivity

/// Component id per vertex (ids in order of smallest member) restricted to the
/// vertices with allowed[v] set; others get -1. Returns the component count.
inline int label_components(const Graph& g, const std::vector<char>& allowed,
                            std::vector<int>& label) {
  label.assign(g.n(), -1);
  int count = 0;
  std::vector<Vertex> stack;
  for (int s = 0; s < g.n(); ++s) {
    if (!allowed[s] || label[s] != -1) continue;
    label[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto w : g.neighbors(v)) {
        if (allowed[w] && label[w] == -1) {
          label[w] = count;
          stack.push_back(w);
        }
      }
    }
    ++count;
  }
  return count;
}

inline std::vector<VertexSet> connected_components(const Graph& g) {
  std::vector<int> label;
  int count = label_components(g, std::vector<char>(g.n(), 1), label);
  std::vector<VertexSet> comps(count);
  for (int v = 0; v < g.n(); ++v) comps[label[v]].push_back(v);
  return comps;
}

/// Components of g[s], each sorted, ordered by smallest vertex.
inline std::vector<VertexSet> components_within(const Graph& g,
                                                std::span<const Vertex> s) {
  std::vector<int> label;
  int count = label_components(g, membership(g.n(), s), label);
  std::vector<VertexSet> comps(count);
  for (int v = 0; v < g.n(); ++v) {
    if (label[v] >= 0) comps[label[v]].push_back(v);
  }
  return comps;
}

inline bool is_connected(const Graph& g) {
  if (g.n() == 0) return true;
  return connected_components(g).size() == 1;
}

/// True iff g[s] is connected (the empty set counts as not connected).
inline bool is_connected_subset(const Graph& g, std::span<const Vertex> s) {
  if (s.empty()) return false;
  return components_within(g, s).size() == 1;
}

// ---------------------------------------------------------------------------
// Subgraphs

struct InducedSubgraph {
  Graph graph;
  /// new index -> original index (sorted ascending).
  std::vector<Vertex> to_parent;
  /// original index -> new index, or -1 when the vertex was dropped.
  std::vector<int> from_parent;

  VertexSet lift(std::span<const Vertex> s) const {
    VertexSet out;
    out.reserve(s.size());
    for (auto v : s) out.push_back(to_parent[v]);
    return normalized(std::move(out));
  }
  std::vector<Vertex> lift_path(std::span<const Vertex> p) const {
    std::vector<Vertex> out;
    out.reserve(p.size());
    for (auto v : p) out.push_back(to_parent[v]);
    return out;
  }
};

/// g[s], relabeled 0..|s|-1 in increasing original index.
inline InducedSubgraph induced_subgraph(const Graph& g,
                                        std::span<const Vertex> s) {
  InducedSubgraph sub;
  auto in = membership(g.n(), s);
  sub.from_parent.assign(g.n(), -1);
  for (int v = 0; v < g.n(); ++v) {
    if (in[v]) {
      sub.from_parent[v] = static_cast<int>(sub.to_parent.size());
      sub.to_parent.push_back(v);
    }
  }
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges()) {
    if (in[u] && in[v]) edges.emplace_back(sub.from_parent[u], sub.from_parent[v]);
  }
  sub.graph = Graph(static_cast<int>(sub.to_parent.size()), std::move(edges));
  return sub;
}

/// g with the listed edges removed (vertex set unchanged).
inline Graph without_edges(const Graph& g, std::span<const Edge> removed) {
  std::vector<char> drop(g.m(), 0);
  for (auto [u, v] : removed) {
    auto id = g.edge_id(u, v);
    if (!id) {
      throw PreconditionError("edge (" + std::to_string(u) + ", " +
                              std::to_string(v) + ") is not in the graph");
    }
    drop[*id] = 1;
  }
  std::vector<Edge> keep;
  for (int id = 0; id < g.m(); ++id) {
    if (!drop[id]) keep.push_back(g.edge(id));
  }
  return Graph(g.n(), std::move(keep));
}

// ---------------------------------------------------------------------------
// Cuts

/// |E(A, V \ A)| given a membership mask.
inline int crossing_count(const Graph& g, const std::vector<char>& in_a) {
  int c = 0;
  for (auto [u, v] : g.edges()) c += (in_a[u] != in_a[v]);
  return c;
}

inline Cut cut_of(const Graph& g, std::span<const Vertex> a) {
  auto in = membership(g.n(), a);
  Cut cut;
  for (int v = 0; v < g.n(); ++v) (in[v] ? cut.side_a : cut.side_b).push_back(v);
  if (cut.side_a.empty() || cut.side_b.empty()) {
    throw PreconditionError("cut_of: both sides of a cut must be non-empty");
  }
  for (auto e : g.edges()) {
    if (in[e.first] != in[e.second]) cut.crossing_edges.push_back(e);
  }
  cut.sparsity = Rational(static_cast<std::int64_t>(cut.crossing_edges.size()),
                          static_cast<std::int64_t>(cut.min_side()));
  return cut;
}

/// Greedy maximal matching inside E(v1, v2), scanning edges in id order.
inline Matching greedy_matching_across(const Graph& g,
                                       std::span<const Vertex> v1,
                                       std::span<const Vertex> v2) {
  auto in1 = membership(g.n(), v1);
  auto in2 = membership(g.n(), v2);
  for (int v = 0; v < g.n(); ++v) {
    if (in1[v] && in2[v]) {
      throw PreconditionError("greedy_matching_across: sets are not disjoint");
    }
  }
  std::vector<char> used(g.n(), 0);
  Matching m;
  for (auto [u, v] : g.edges()) {
    Vertex a = u, b = v;
    if (in2[a] && in1[b]) std::swap(a, b);
    if (!(in1[a] && in2[b])) continue;
    if (used[a] || used[b]) continue;
    used[a] = used[b] = 1;
    m.pairs.emplace_back(a, b);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Edge-list I/O: "n m" header, then m lines "u v" with u < v; '#' comments.

inline Graph parse_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  bool have_header = false;
  long long n = 0, m = 0;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long long a, b;
    std::string extra;
    if (!(ls >> a >> b) || (ls >> extra)) {
      throw GraphFormatError("line " + std::to_string(line_no) +
                             ": expected two integers");
    }
    if (!have_header) {
      if (a < 0 || b < 0 || a > (1LL << 30) || b > (1LL << 31)) {
        throw GraphFormatError("line " + std::to_string(line_no) +
                               ": bad header");
      }
      n = a;
      m = b;
      have_header = true;
      continue;
    }
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw GraphFormatError("line " + std::to_string(line_no) +
                             ": vertex index out of range");
    }
    if (a == b) {
      throw GraphFormatError("line " + std::to_string(line_no) +
                             ": self-loop at vertex " + std::to_string(a));
    }
    edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  if (!have_header) throw GraphFormatError("missing 'n m' header");
  if (static_cast<long long>(edges.size()) != m) {
    throw GraphFormatError("header declares " + std::to_string(m) +
                           " edges but file has " +
                           std::to_string(edges.size()));
  }
  return Graph(static_cast<int>(n), std::move(edges));
}

inline Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

inline Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file '" + path + "'");
  return parse_graph(in);
}

inline std::string format_graph(const Graph& g) {
  std::string out = std::to_string(g.n()) + " " + std::to_string(g.m()) + "\n";
  for (auto [u, v] : g.edges()) {
    out += std::to_string(u) + " " + std::to_string(v) + "\n";
  }
  return out;
}

inline void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write graph file '" + path + "'");
  out << format_graph(g);
}

}  // namespace expminor
