#include <iostream>

#include "CLI11.hpp"
#include "pwc/commands.hpp"

namespace {

void add_sets(CLI::App* sub, pwc::cli::Options& o) {
  sub->add_option("s1", o.s1_file, "set document for S1")->required();
  sub->add_option("s2", o.s2_file, "set document for S2")->required();
  sub->add_option("--out", o.out, "write the report here instead of stdout");
  sub->add_option("--threads", o.threads, "OpenMP worker count (0 = default)")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide, verify and witness contractivity of spectral projections on Paley-Wiener spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(PWC_VERSION));
  pwc::cli::Options o;

  auto* decide = app.add_subcommand("decide", "exact verdict and condition set");
  add_sets(decide, o);
  decide->add_option("--p", o.p, "exponent: integer, p/q, decimal or inf")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "randomized and optimized checks in the lattice model");
  add_sets(verify, o);
  verify->add_option("--p", o.p, "exponent")->capture_default_str();
  verify->add_option("--trials", o.trials, "random spectra")->capture_default_str();
  verify->add_option("--seed", o.seed, "random seed")->capture_default_str();
  verify->add_option("--lattice-L", o.lattice_L, "period L of the model (frequency lattice (1/L)Z)")->capture_default_str();
  verify->add_option("--iterations", o.iterations, "ascent iterations per restart")->capture_default_str();
  verify->add_option("--restarts", o.restarts, "ascent restarts")->capture_default_str()->check(CLI::PositiveNumber);

  auto* witness = app.add_subcommand("witness", "certified pair f, g with ||f + eps g||_p < ||f||_p");
  add_sets(witness, o);
  witness->add_option("--p", o.p, "exponent")->capture_default_str();
  witness->add_option("--grid-T", o.grid_T, "grid half-width")->capture_default_str();
  witness->add_option("--grid-M", o.grid_M, "grid samples (power of two)")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "verdicts for p = 2, 4, ..., 2 k-max as CSV");
  add_sets(sweep, o);
  sweep->add_option("--k-max", o.k_max, "largest k")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pwc::cli::kUsage;
  }

  if (*decide) return pwc::cli::cmd_decide(o, std::cerr);
  if (*verify) return pwc::cli::cmd_verify(o, std::cerr);
  if (*witness) return pwc::cli::cmd_witness(o, std::cerr);
  return pwc::cli::cmd_sweep(o, std::cerr);
}
