#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "tqt/errors.hpp"
#include "tqt/quadrature.hpp"

namespace {

void add_config_flags(CLI::App* cmd, tqt::cli::Config& cfg) {
  cmd->add_option("--mode", cfg.mode, "Scalar mode (defaults to the instance's)")->check(CLI::IsMember({"exact", "float"}));
  cmd->add_option("--tolerance", cfg.tolerance, "Float-mode tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-arity", cfg.max_arity, "Largest arity K of F_k")->check(CLI::Range(1, 8));
  cmd->add_option("--quad-budget", cfg.quad_budget, "Quadrature evaluation budget")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "Seed for splitting choices and sampling");
  cmd->add_option("--output", cfg.output, "Report format")->check(CLI::IsMember({"text", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tqt::cli;
  CLI::App app{"Homotopy transfer, Hochschild chain maps and traces on finite dg modules"};
  app.require_subcommand(1);

  GenOptions gen;
  std::string gen_out;
  auto* g = app.add_subcommand("gen", "Generate an instance file");
  g->add_option("--kind", gen.kind, "matrix | torus | random")->check(CLI::IsMember({"matrix", "torus", "random"}));
  g->add_option("--preset", gen.preset, "Matrix preset (T1)");
  g->add_option("--dims", gen.dims, "Dimensions of degrees 0, 1, … (e.g. 2,2)");
  g->add_option("--N", gen.n_trunc, "Torus Fourier truncation")->check(CLI::PositiveNumber);
  g->add_option("--tau", gen.tau, "Torus modulus re,im");
  g->add_option("--seed", gen.seed, "Random-instance seed (also the splitting seed)");
  g->add_option("--budget", gen.budget, "Random-instance generator count")->check(CLI::NonNegativeNumber);
  g->add_flag("--with-splitting", gen.with_splitting, "Store an explicit projector splitting");
  g->add_option("--out", gen_out, "Output file (default: stdout)");

  Config cfg;
  std::string instance, chain;
  auto* v = app.add_subcommand("verify", "Run every identity check on an instance");
  v->add_option("--instance", instance, "Instance file")->required();
  add_config_flags(v, cfg);

  auto* t = app.add_subcommand("trace", "Evaluate the pulled-back trace on chains");
  t->add_option("--instance", instance, "Instance file")->required();
  t->add_option("--chain", chain, "Chain file")->required();
  t->add_option("--cyclic", cfg.cyclic, "Also evaluate the cyclic trace of this level")->check(CLI::NonNegativeNumber);
  t->add_flag("--quadrature", cfg.quadrature, "Float mode: evaluate F_k by quadrature with error bars");
  add_config_flags(t, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (*g) {
      if (gen_out.empty()) return cmd_gen(gen, std::cout);
      std::ofstream f(gen_out);
      if (!f) throw tqt::InputError("cannot write \"" + gen_out + "\"");
      return cmd_gen(gen, f);
    }
    if (*v) return cmd_verify(instance, cfg, std::cout);
    return cmd_trace(instance, chain, cfg, std::cout);
  } catch (const tqt::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const tqt::ShapeError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const tqt::QuadratureError& e) {
    std::cerr << "quadrature error: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}
