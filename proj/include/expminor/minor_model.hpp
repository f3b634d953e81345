#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "expminor/graph.hpp"

namespace expminor {

struct ModelFormatError : Error {
  using Error::Error;
};

/// Branch set per target vertex and one host path per target edge.
struct MinorModel {
  std::vector<VertexSet> branch_sets;
  /// Keyed by target edge (u, v) with u < v; paths run from X_u to X_v.
  std::map<Edge, std::vector<Vertex>> edge_paths;
};

struct Violation {
  /// "(i)".."(iv)" for the definition's clauses; "(structure)" for malformed
  /// models (missing entries, out-of-range vertices, non-edges on paths).
  std::string clause;
  std::string witness;

  friend bool operator<(const Violation& a, const Violation& b) {
    return std::tie(a.clause, a.witness) < std::tie(b.clause, b.witness);
  }
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct VerifyResult {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

namespace detail {

inline std::string edge_name(Edge e) {
  return "(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")";
}

}  // namespace detail

/// Checks the four clauses of a minor model of h in g. Never throws on bad
/// input; every problem becomes a violation, sorted by clause then witness.
inline VerifyResult verify_model(const Graph& g, const Graph& h, const MinorModel& m) {
  VerifyResult res;
  auto add = [&](std::string clause, std::string witness) {
    res.violations.push_back({std::move(clause), std::move(witness)});
  };
  const int n = g.n();
  auto in_range = [&](Vertex v) { return v >= 0 && v < n; };

  if (static_cast<int>(m.branch_sets.size()) != h.n()) {
    add("(structure)", "model has " + std::to_string(m.branch_sets.size()) +
                           " branch sets for " + std::to_string(h.n()) + " target vertices");
  }
  const int k = std::min<int>(h.n(), static_cast<int>(m.branch_sets.size()));

  // owner[v]: target vertex whose branch set holds v.
  std::vector<int> owner(n, -1);
  for (int u = 0; u < k; ++u) {
    const auto& x = m.branch_sets[u];
    VertexSet clean;
    for (auto v : x) {
      if (!in_range(v)) {
        add("(structure)", "branch set " + std::to_string(u) + " has vertex " +
                               std::to_string(v) + " outside the host");
        continue;
      }
      clean.push_back(v);
    }
    const auto listed = clean.size();
    clean = normalized(std::move(clean));
    if (clean.size() != listed) {
      add("(structure)", "branch set " + std::to_string(u) + " repeats a vertex");
    }
    if (!is_connected_subset(g, clean)) {
      add("(i)", "branch set " + std::to_string(u) +
                     (clean.empty() ? " is empty" : " is not connected"));
    }
    for (auto v : clean) {
      if (owner[v] >= 0 && owner[v] != u) {
        add("(ii)", "vertex " + std::to_string(v) + " in branch sets " +
                        std::to_string(owner[v]) + " and " + std::to_string(u));
      } else {
        owner[v] = u;
      }
    }
  }

  for (const auto& [e, _] : m.edge_paths) {
    if (e.first > e.second || e.first < 0 || e.second >= h.n() ||
        !h.has_edge(e.first, e.second)) {
      add("(structure)", "path for " + detail::edge_name(e) + " which is not a target edge");
    }
  }

  for (int id = 0; id < h.m(); ++id) {
    auto e = h.edge(id);
    auto it = m.edge_paths.find(e);
    if (it == m.edge_paths.end()) {
      add("(structure)", "missing path for target edge " + detail::edge_name(e));
      continue;
    }
    const auto& p = it->second;
    auto name = detail::edge_name(e);
    if (p.empty()) {
      add("(iii)", "path " + name + " is empty");
      continue;
    }
    if (!std::all_of(p.begin(), p.end(), in_range)) {
      add("(structure)", "path " + name + " leaves the host vertex range");
      continue;
    }
    auto sorted = normalized(p);
    if (sorted.size() != p.size()) add("(iv)", "path " + name + " is not simple");
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      if (!g.has_edge(p[i], p[i + 1])) {
        add("(structure)", "path " + name + " uses non-edge (" + std::to_string(p[i]) +
                               "," + std::to_string(p[i + 1]) + ")");
      }
    }
    auto [a, b] = e;
    auto owner_of = [&](Vertex v) { return owner[v]; };
    bool forward = owner_of(p.front()) == a && owner_of(p.back()) == b;
    bool backward = owner_of(p.front()) == b && owner_of(p.back()) == a;
    if (!forward && !backward) {
      add("(iii)", "path " + name + " runs " + std::to_string(p.front()) + " -> " +
                       std::to_string(p.back()) + ", not between X_" + std::to_string(a) +
                       " and X_" + std::to_string(b));
    }
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      auto v = p[i];
      if (owner[v] >= 0) {
        add("(iv)", "path " + name + " passes through vertex " + std::to_string(v) +
                        " of branch set " + std::to_string(owner[v]));
      }
    }
  }
  // Internal disjointness between paths: internal vertices of one path may
  // not appear anywhere on another path.
  std::vector<std::vector<int>> on_paths(n);
  for (int id = 0; id < h.m(); ++id) {
    auto it = m.edge_paths.find(h.edge(id));
    if (it == m.edge_paths.end()) continue;
    auto vs = normalized(it->second);
    for (auto v : vs) {
      if (in_range(v)) on_paths[v].push_back(id);
    }
  }
  for (int id = 0; id < h.m(); ++id) {
    auto it = m.edge_paths.find(h.edge(id));
    if (it == m.edge_paths.end()) continue;
    const auto& p = it->second;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      auto v = p[i];
      if (!in_range(v)) continue;
      for (int other : on_paths[v]) {
        if (other == id) continue;
        add("(iv)", "paths " + detail::edge_name(h.edge(id)) + " and " +
                        detail::edge_name(h.edge(other)) + " share vertex " +
                        std::to_string(v));
      }
    }
  }
  std::sort(res.violations.begin(), res.violations.end());
  res.violations.erase(std::unique(res.violations.begin(), res.violations.end()),
                       res.violations.end());
  return res;
}

// ---------------------------------------------------------------------------
// Model file: "MODEL n_H", "BRANCH u: v...", "PATH u v: w..."

inline std::string format_model(const Graph& h, const MinorModel& m) {
  std::string out = "MODEL " + std::to_string(h.n()) + "\n";
  for (int u = 0; u < static_cast<int>(m.branch_sets.size()); ++u) {
    out += "BRANCH " + std::to_string(u) + ":";
    for (auto v : m.branch_sets[u]) out += " " + std::to_string(v);
    out += "\n";
  }
  for (const auto& [e, p] : m.edge_paths) {
    out += "PATH " + std::to_string(e.first) + " " + std::to_string(e.second) + ":";
    for (auto v : p) out += " " + std::to_string(v);
    out += "\n";
  }
  return out;
}

inline MinorModel parse_model(std::istream& in) {
  MinorModel m;
  std::string line;
  int line_no = 0;
  long long declared = -1;
  auto fail = [&](const std::string& why) {
    throw ModelFormatError("model line " + std::to_string(line_no) + ": " + why);
  };
  auto read_ints = [&](const std::string& s) {
    std::istringstream ls(s);
    std::vector<Vertex> vs;
    long long x;
    while (ls >> x) vs.push_back(static_cast<Vertex>(x));
    if (!ls.eof()) fail("expected integers");
    return vs;
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "MODEL") {
      if (declared >= 0) fail("duplicate MODEL header");
      if (!(ls >> declared) || declared < 0) fail("bad MODEL header");
      m.branch_sets.assign(declared, {});
      continue;
    }
    if (declared < 0) fail("missing MODEL header");
    auto colon = line.find(':');
    if (colon == std::string::npos) fail("missing ':'");
    auto head = read_ints(line.substr(first + tag.size(), colon - first - tag.size()));
    auto body = read_ints(line.substr(colon + 1));
    if (tag == "BRANCH") {
      if (head.size() != 1 || head[0] < 0 || head[0] >= declared) fail("bad BRANCH index");
      m.branch_sets[head[0]] = std::move(body);
    } else if (tag == "PATH") {
      if (head.size() != 2) fail("bad PATH header");
      Edge e{std::min(head[0], head[1]), std::max(head[0], head[1])};
      if (m.edge_paths.count(e)) fail("duplicate PATH");
      if (head[0] > head[1]) std::reverse(body.begin(), body.end());
      m.edge_paths[e] = std::move(body);
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (declared < 0) throw ModelFormatError("missing MODEL header");
  return m;
}

inline MinorModel parse_model(const std::string& text) {
  std::istringstream in(text);
  return parse_model(in);
}

inline MinorModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file '" + path + "'");
  return parse_model(in);
}

inline void save_model(const Graph& h, const MinorModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file '" + path + "'");
  out << format_model(h, m);
}

// ---------------------------------------------------------------------------
// Brute-force minor oracle

struct BudgetExceeded : Error {
  using Error::Error;
};

inline constexpr int kBruteForceMaxN = 10;

namespace detail {

/// Is there a bijection from h's vertices onto the k blocks that maps every
/// h-edge onto a block adjacency?
inline bool embeds_into_quotient(const Graph& h, const std::vector<std::uint32_t>& qadj) {
  const int k = h.n();
  std::vector<int> assign(k, -1);
  std::uint32_t used = 0;
  auto rec = [&](auto&& self, int u) -> bool {
    if (u == k) return true;
    for (int b = 0; b < k; ++b) {
      if (used & (1u << b)) continue;
      bool ok = true;
      for (auto w : h.neighbors(u)) {
        if (w < u && !(qadj[b] & (1u << assign[w]))) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      assign[u] = b;
      used |= 1u << b;
      if (self(self, u + 1)) return true;
      used &= ~(1u << b);
    }
    assign[u] = -1;
    return false;
  };
  return rec(rec, 0);
}

}  // namespace detail

/// Exhaustive minor test: enumerate partitions of a subset of V(g) into
/// exactly |V(h)| connected blocks (the rest deleted) and test whether the
/// quotient graph contains h.
inline bool brute_force_is_minor(const Graph& g, const Graph& h) {
  if (g.n() > kBruteForceMaxN) {
    throw BudgetExceeded("brute_force_is_minor: host has " + std::to_string(g.n()) +
                         " vertices, budget is " + std::to_string(kBruteForceMaxN));
  }
  const int n = g.n();
  const int k = h.n();
  if (k == 0) return true;
  if (k > n || h.m() > g.m() || h.size() > g.size()) return false;
  std::vector<std::uint32_t> adj(n, 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
  auto connected = [&](std::uint32_t set) {
    std::uint32_t seen = set & (~set + 1);
    std::uint32_t frontier = seen;
    while (frontier) {
      int v = std::countr_zero(frontier);
      frontier &= frontier - 1;
      std::uint32_t nb = adj[v] & set & ~seen;
      seen |= nb;
      frontier |= nb;
    }
    return seen == set;
  };
  std::vector<std::uint32_t> blocks(k, 0);
  int used_blocks = 0;
  auto check = [&]() {
    for (int b = 0; b < k; ++b) {
      if (!connected(blocks[b])) return false;
    }
    std::vector<std::uint32_t> qadj(k, 0);
    int qedges = 0;
    for (int a = 0; a < k; ++a) {
      std::uint32_t nb = 0;
      for (std::uint32_t s = blocks[a]; s; s &= s - 1) nb |= adj[std::countr_zero(s)];
      for (int b = 0; b < k; ++b) {
        if (b != a && (nb & blocks[b])) qadj[a] |= 1u << b;
      }
      qedges += std::popcount(qadj[a]);
    }
    if (qedges / 2 < h.m()) return false;
    return detail::embeds_into_quotient(h, qadj);
  };
  auto rec = [&](auto&& self, int v) -> bool {
    if (n - v < k - used_blocks) return false;
    if (v == n) return used_blocks == k && check();
    // deleted
    if (self(self, v + 1)) return true;
    for (int b = 0; b < used_blocks; ++b) {
      blocks[b] |= 1u << v;
      bool hit = self(self, v + 1);
      blocks[b] &= ~(1u << v);
      if (hit) return true;
    }
    if (used_blocks < k) {
      blocks[used_blocks] = 1u << v;
      ++used_blocks;
      bool hit = self(self, v + 1);
      --used_blocks;
      blocks[used_blocks] = 0;
      if (hit) return true;
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace expminor
