#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "expminor/commands.hpp"

namespace {

using expminor::Rational;

std::optional<Rational> parse_alpha(const std::string& s, std::string& error) {
  try {
    return Rational::parse(s);
  } catch (const std::exception& e) {
    error = e.what();
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minor embedding into bounded-degree expanders"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Write a generated graph in edge-list format");
  std::string kind;
  expminor::GenSpec spec;
  std::string gen_out;
  gen->add_option("--kind", kind,
                  "random-regular | gnp | cycle | path | grid | clique | barbell | "
                  "two-expanders-bridge | hypercube | petersen")
      ->required();
  gen->add_option("--n", spec.n, "vertex count (per side for two-expanders-bridge)");
  gen->add_option("--d", spec.d, "degree");
  gen->add_option("--p", spec.p, "edge probability");
  gen->add_option("--a", spec.a, "grid rows");
  gen->add_option("--b", spec.b, "grid columns");
  gen->add_option("--k", spec.k, "barbell clique size");
  gen->add_option("--dim", spec.dim, "hypercube dimension");
  gen->add_option("--seed", spec.seed, "RNG seed");
  gen->add_option("--out", gen_out, "output file (stdout when omitted)");

  // embed
  auto* embed = app.add_subcommand("embed", "Embed a target graph as a minor of the host");
  expminor::EmbedArgs ea;
  std::string alpha_text = "1/2";
  std::string mode = "permissive";
  std::uint64_t seed_value = 0;
  embed->add_option("--host", ea.host, "host edge-list file")->required();
  embed->add_option("--target", ea.target, "target edge-list file")->required();
  embed->add_option("--alpha", alpha_text, "claimed expansion, e.g. 1/4");
  auto* seed_opt = embed->add_option("--seed", seed_value, "RNG seed (entropy when omitted)");
  embed->add_option("--retries", ea.retries, "retry budget for probabilistic stages");
  embed->add_option("--mode", mode, "permissive | strict")
      ->check(CLI::IsMember({"permissive", "strict"}));
  embed->add_option("--trials", ea.trials, "independent seeds run concurrently");
  embed->add_option("--out-dir", ea.out_dir, "directory for model/cut/report files");
  embed->add_option("--rho-c", ea.rho_c, "constant in the terminal count rho");
  embed->add_option("--c-eta", ea.c_eta, "constant in the congestion bound eta");
  embed->add_option("--eps", ea.eps, "multicommodity flow accuracy");
  embed->add_option("--threads", ea.threads, "worker threads for --trials (0 = auto)");

  // verify
  auto* verify = app.add_subcommand("verify", "Check a minor model file");
  std::string v_host, v_target, v_model;
  verify->add_option("--host", v_host, "host edge-list file")->required();
  verify->add_option("--target", v_target, "target edge-list file")->required();
  verify->add_option("--model", v_model, "model file")->required();

  // cut
  auto* cut = app.add_subcommand("cut", "Find a sparse cut");
  std::string c_graph, c_mode = "sweep", c_out;
  cut->add_option("--graph", c_graph, "edge-list file")->required();
  cut->add_option("--mode", c_mode, "sweep | exact")->check(CLI::IsMember({"sweep", "exact"}));
  cut->add_option("--out", c_out, "cut file (stdout only when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : expminor::kExitUsage;
  }

  if (gen->parsed()) {
    try {
      spec.kind = expminor::parse_gen_kind(kind);
    } catch (const std::exception& e) {
      std::cerr << "gen: " << e.what() << "\n";
      return expminor::kExitUsage;
    }
    return expminor::cmd_gen(spec, gen_out, std::cout, std::cerr);
  }
  if (embed->parsed()) {
    std::string error;
    auto alpha = parse_alpha(alpha_text, error);
    if (!alpha) {
      std::cerr << "embed: " << error << "\n";
      return expminor::kExitUsage;
    }
    ea.alpha = *alpha;
    ea.mode = mode == "strict" ? expminor::SizeGuard::Strict : expminor::SizeGuard::Permissive;
    if (seed_opt->count() > 0) ea.seed = seed_value;
    return expminor::cmd_embed(ea, std::cout, std::cerr);
  }
  if (verify->parsed()) {
    return expminor::cmd_verify(v_host, v_target, v_model, std::cout, std::cerr);
  }
  auto m = c_mode == "exact" ? expminor::CutMode::Exact : expminor::CutMode::Sweep;
  return expminor::cmd_cut(c_graph, m, c_out, std::cout, std::cerr);
}
