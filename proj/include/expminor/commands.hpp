#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "expminor/embed.hpp"
#include "expminor/generators.hpp"
#include "expminor/minor_model.hpp"
#include "expminor/spectral.hpp"

namespace expminor {

enum ExitCode : int {
  kExitModel = 0,
  kExitUsage = 1,
  kExitCertificate = 2,
  kExitFailed = 3,
};

// ---------------------------------------------------------------------------
// Cut file: "A: ...", "B: ...", "sparsity: p/q"

struct CutFormatError : Error {
  using Error::Error;
};

inline std::string format_cut(const Cut& c) {
  std::string out = "A:";
  for (auto v : c.side_a) out += " " + std::to_string(v);
  out += "\nB:";
  for (auto v : c.side_b) out += " " + std::to_string(v);
  out += "\nsparsity: " + c.sparsity.str() + "\n";
  return out;
}

struct CutFile {
  VertexSet side_a;
  VertexSet side_b;
  Rational sparsity;
};

inline CutFile parse_cut(std::istream& in) {
  CutFile cf;
  bool seen[3] = {false, false, false};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw CutFormatError("cut file: missing ':' in '" + line + "'");
    auto key = line.substr(0, colon);
    std::istringstream rest(line.substr(colon + 1));
    if (key == "A" || key == "B") {
      VertexSet& side = key == "A" ? cf.side_a : cf.side_b;
      long long v;
      while (rest >> v) side.push_back(static_cast<Vertex>(v));
      if (!rest.eof()) throw CutFormatError("cut file: bad vertex list in '" + line + "'");
      seen[key == "A" ? 0 : 1] = true;
    } else if (key == "sparsity") {
      std::string s;
      rest >> s;
      try {
        cf.sparsity = Rational::parse(s);
      } catch (const std::exception&) {
        throw CutFormatError("cut file: bad sparsity '" + s + "'");
      }
      seen[2] = true;
    } else {
      throw CutFormatError("cut file: unknown key '" + key + "'");
    }
  }
  if (!seen[0] || !seen[1] || !seen[2]) throw CutFormatError("cut file: missing line");
  return cf;
}

inline CutFile load_cut(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open cut file '" + path + "'");
  return parse_cut(in);
}

// ---------------------------------------------------------------------------
// Run report: "key = value" lines in insertion order.

class RunReport {
 public:
  void set(const std::string& key, std::string value) {
    for (auto& [k, v] : entries_) {
      if (k == key) {
        v = std::move(value);
        return;
      }
    }
    entries_.emplace_back(key, std::move(value));
  }
  template <typename T>
    requires std::is_arithmetic_v<T>
  void set(const std::string& key, T value) {
    if constexpr (std::is_same_v<T, bool>) {
      set(key, std::string(value ? "true" : "false"));
    } else {
      set(key, std::to_string(value));
    }
  }
  std::optional<std::string> get(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
      if (k == key) return v;
    }
    return std::nullopt;
  }
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::string str() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

inline RunReport parse_report(std::istream& in) {
  RunReport r;
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    r.set(line.substr(0, eq), line.substr(eq + 3));
  }
  return r;
}

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + p.string() + "'");
}

inline std::string join_vertices(const VertexSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + std::to_string(s[i]);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// gen

inline int cmd_gen(const GenSpec& spec, const std::string& out_path, std::ostream& out,
                   std::ostream& err) {
  try {
    auto g = generate(spec);
    if (out_path.empty()) {
      out << format_graph(g);
    } else {
      save_graph(g, out_path);
    }
    return kExitModel;
  } catch (const std::exception& e) {
    err << "gen: " << e.what() << "\n";
    return kExitUsage;
  }
}

// ---------------------------------------------------------------------------
// embed

struct EmbedArgs {
  std::string host;
  std::string target;
  Rational alpha = Rational(1, 2);
  std::optional<std::uint64_t> seed;
  int retries = 5;
  SizeGuard mode = SizeGuard::Permissive;
  int trials = 1;
  std::string out_dir = ".";
  double rho_c = 1;
  double c_eta = 128;
  double eps = 0.1;
  int threads = 0;  // 0 selects hardware concurrency
};

inline const char* mode_name(SizeGuard m) {
  return m == SizeGuard::Strict ? "strict" : "permissive";
}

inline const char* outcome_name(EmbedOutcome::Kind k) {
  switch (k) {
    case EmbedOutcome::Kind::Model: return "model";
    case EmbedOutcome::Kind::NotAnExpander: return "not-an-expander";
    case EmbedOutcome::Kind::Failed: return "failed";
  }
  return "?";
}

struct TrialFiles {
  std::string model = "model.txt";
  std::string cut = "cut.txt";
  std::string report = "report.txt";
  std::string timings = "timings.txt";
};

inline TrialFiles trial_files(int trial, int trials) {
  TrialFiles f;
  if (trials > 1) {
    auto s = "." + std::to_string(trial);
    f.model = "model" + s + ".txt";
    f.cut = "cut" + s + ".txt";
    f.report = "report" + s + ".txt";
    f.timings = "timings" + s + ".txt";
  }
  return f;
}

struct TrialResult {
  int exit_code = kExitUsage;
  std::string summary;  // printed to stdout
  std::string error;
};

/// One embedding run. The report holds only seed-determined fields; wall
/// times go to the separate timings file.
inline TrialResult run_embed_trial(const Graph& g, const Graph& h, const EmbedArgs& a,
                                   std::uint64_t seed, const std::filesystem::path& dir,
                                   const TrialFiles& files) {
  TrialResult tr;
  RunReport rep;
  rep.set("outcome", "error");
  rep.set("exit_code", static_cast<int>(kExitUsage));
  rep.set("host", std::filesystem::path(a.host).filename().string());
  rep.set("target", std::filesystem::path(a.target).filename().string());
  rep.set("alpha", a.alpha.str());
  rep.set("seed", seed);
  rep.set("retries", a.retries);
  rep.set("mode", mode_name(a.mode));
  rep.set("n", g.n());
  rep.set("m", g.m());
  rep.set("d", g.max_degree());
  rep.set("target_n", h.n());
  rep.set("target_m", h.m());
  const std::vector<std::string> stat_keys = {
      "reduced_n", "reduced_m", "rho", "rho_effective", "rho_downgraded", "q", "L", "eta",
      "outer_iterations", "retries_used", "resamples", "stage", "failure",
      "cut_sparsity", "cut_side_a", "cut_side_b", "cut_crossing", "artifact"};
  for (const auto& k : stat_keys) rep.set(k, "-");

  EmbedConfig cfg;
  cfg.alpha = a.alpha;
  cfg.max_retries = a.retries;
  cfg.seed = seed;
  cfg.rho_c = a.rho_c;
  cfg.size_guard = a.mode;
  cfg.c_eta = a.c_eta;
  cfg.mcf.eps = a.eps;

  std::ostringstream summary;
  EmbedStats stats;
  try {
    auto res = embed_minor(g, cfg, h);
    stats = res.stats;
    rep.set("outcome", outcome_name(res.kind));
    rep.set("reduced_n", stats.reduced_n);
    rep.set("reduced_m", stats.reduced_m);
    rep.set("rho", stats.rho);
    rep.set("rho_effective", stats.rho_effective);
    rep.set("rho_downgraded", stats.rho_downgraded);
    rep.set("q", stats.q);
    rep.set("L", stats.L);
    rep.set("eta", stats.eta);
    rep.set("outer_iterations", stats.outer_iterations);
    rep.set("retries_used", stats.retries_used);
    rep.set("resamples", static_cast<long long>(stats.resamples));
    rep.set("stage", stats.stage.empty() ? "-" : stats.stage);
    summary << "outcome = " << outcome_name(res.kind) << "\n";
    switch (res.kind) {
      case EmbedOutcome::Kind::Model:
        detail::write_file(dir / files.model, format_model(h, res.model));
        rep.set("artifact", files.model);
        tr.exit_code = kExitModel;
        summary << "model = " << (dir / files.model).string() << "\n";
        break;
      case EmbedOutcome::Kind::NotAnExpander: {
        const Cut& c = *res.cut;
        detail::write_file(dir / files.cut, format_cut(c));
        rep.set("artifact", files.cut);
        rep.set("cut_sparsity", c.sparsity.str());
        rep.set("cut_side_a", static_cast<long long>(c.side_a.size()));
        rep.set("cut_side_b", static_cast<long long>(c.side_b.size()));
        rep.set("cut_crossing", static_cast<long long>(c.crossing_edges.size()));
        tr.exit_code = kExitCertificate;
        summary << "sparsity: " << c.sparsity.str() << "\n";
        summary << "cut = " << (dir / files.cut).string() << "\n";
        break;
      }
      case EmbedOutcome::Kind::Failed:
        rep.set("failure", res.failure);
        tr.exit_code = kExitFailed;
        summary << "failure = " << res.failure << "\n";
        break;
    }
  } catch (const PreconditionError& e) {
    tr.error = std::string("embed: ") + e.what();
    rep.set("failure", e.what());
    tr.exit_code = kExitUsage;
  } catch (const std::exception& e) {
    tr.error = std::string("embed: internal error: ") + e.what();
    rep.set("failure", std::string("internal: ") + e.what());
    tr.exit_code = kExitUsage;
  }
  rep.set("exit_code", tr.exit_code);
  RunReport timings;
  for (const auto& [stage, ms] : stats.timings_ms) {
    std::ostringstream v;
    v.precision(3);
    v << std::fixed << ms;
    timings.set(stage + "_ms", v.str());
  }
  try {
    detail::write_file(dir / files.report, rep.str());
    detail::write_file(dir / files.timings, timings.str());
  } catch (const std::exception& e) {
    tr.error = e.what();
    tr.exit_code = kExitUsage;
  }
  tr.summary = summary.str();
  return tr;
}

inline std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

/// Runs --trials independent seeds (trial t uses derive_seed(seed, t) when
/// trials > 1). Exit: 0 if any model, else 2 if any certificate, else 3;
/// 1 on usage or I/O errors.
inline int cmd_embed(const EmbedArgs& a, std::ostream& out, std::ostream& err) {
  if (a.trials < 1) {
    err << "embed: --trials must be >= 1\n";
    return kExitUsage;
  }
  if (!(a.alpha > Rational(0))) {
    err << "embed: --alpha must be positive\n";
    return kExitUsage;
  }
  if (a.retries < 0) {
    err << "embed: --retries must be >= 0\n";
    return kExitUsage;
  }
  Graph g, h;
  try {
    g = load_graph(a.host);
    h = load_graph(a.target);
  } catch (const std::exception& e) {
    err << "embed: " << e.what() << "\n";
    return kExitUsage;
  }
  std::filesystem::path dir(a.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "embed: cannot create output directory '" << a.out_dir << "'\n";
    return kExitUsage;
  }
  std::uint64_t seed = a.seed ? *a.seed : entropy_seed();
  if (!a.seed) out << "seed = " << seed << "\n";

  std::vector<TrialResult> results(a.trials);
  auto run = [&](int t) {
    auto s = a.trials > 1 ? derive_seed(seed, static_cast<std::uint64_t>(t)) : seed;
    results[t] = run_embed_trial(g, h, a, s, dir, trial_files(t, a.trials));
  };
  if (a.trials == 1) {
    run(0);
  } else {
    unsigned workers = a.threads > 0 ? static_cast<unsigned>(a.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(a.trials));
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int t = next++; t < a.trials; t = next++) run(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  bool any_model = false, any_cert = false, any_usage = false;
  for (int t = 0; t < a.trials; ++t) {
    const auto& r = results[t];
    if (a.trials > 1) out << "trial " << t << ": exit " << r.exit_code << "\n";
    out << r.summary;
    if (!r.error.empty()) err << r.error << "\n";
    any_model |= r.exit_code == kExitModel;
    any_cert |= r.exit_code == kExitCertificate;
    any_usage |= r.exit_code == kExitUsage;
  }
  if (any_usage) return kExitUsage;
  if (any_model) return kExitModel;
  if (any_cert) return kExitCertificate;
  return kExitFailed;
}

// ---------------------------------------------------------------------------
// verify

/// Exit 0 when the model is valid, 2 with one violation per line otherwise.
inline int cmd_verify(const std::string& host, const std::string& target,
                      const std::string& model_path, std::ostream& out, std::ostream& err) {
  Graph g, h;
  MinorModel m;
  try {
    g = load_graph(host);
    h = load_graph(target);
    m = load_model(model_path);
  } catch (const std::exception& e) {
    err << "verify: " << e.what() << "\n";
    return kExitUsage;
  }
  auto res = verify_model(g, h, m);
  if (res.valid()) {
    out << "valid\n";
    return kExitModel;
  }
  for (const auto& v : res.violations) out << v.clause << " " << v.witness << "\n";
  return kExitCertificate;
}

// ---------------------------------------------------------------------------
// cut

enum class CutMode { Sweep, Exact };

inline int cmd_cut(const std::string& graph_path, CutMode mode, const std::string& out_path,
                   std::ostream& out, std::ostream& err) {
  try {
    auto g = load_graph(graph_path);
    if (g.n() < 2) {
      err << "cut: graph needs at least 2 vertices\n";
      return kExitUsage;
    }
    Cut c;
    if (mode == CutMode::Exact) {
      if (g.n() > kExactExpansionMaxN) {
        err << "cut: exact mode needs n <= " << kExactExpansionMaxN << "\n";
        return kExitUsage;
      }
      c = exact_expansion(g).witness;
    } else if (!is_connected(g)) {
      c = cut_of(g, connected_components(g)[0]);
    } else {
      c = sweep_cut(g);
    }
    auto text = format_cut(c);
    if (!out_path.empty()) detail::write_file(out_path, text);
    out << text;
    return kExitModel;
  } catch (const std::exception& e) {
    err << "cut: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace expminor
