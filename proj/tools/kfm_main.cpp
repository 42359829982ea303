#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kfm/problem.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fractal-measure spectral solver on model manifolds"};
  app.require_subcommand(1);
  app.fallthrough();

  kfm::CommandOptions opt;
  app.add_option("--spec", opt.spec_path, "problem spec JSON")->configurable(false);
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_option("--threads", opt.threads, "worker threads for scans");
  app.add_option("--seed", opt.seed, "seed for randomized checks");

  auto* eig = app.add_subcommand("eig", "assemble the measure pencil and export the eigenbasis");
  auto* solve = app.add_subcommand("solve", "evolve a wave/heat/Schrodinger problem");
  auto* dim = app.add_subcommand("dim", "estimate the L-infinity dimension of a measure");
  auto* verify = app.add_subcommand("verify", "run the built-in invariant suite");
  auto* bilip = app.add_subcommand("bilip", "scan the halving-map distortion ratio");
  auto* gifs = app.add_subcommand("gifs-check", "validate the torus GIFS data");
  auto* oracle = app.add_subcommand("oracle-compare", "compare discrete eigenpairs to closed forms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  if (eig->parsed()) return kfm::cmd_eig(opt);
  if (solve->parsed()) return kfm::cmd_solve(opt);
  if (dim->parsed()) return kfm::cmd_dim(opt);
  if (verify->parsed()) return kfm::cmd_verify(opt);
  if (bilip->parsed()) return kfm::cmd_bilip(opt);
  if (gifs->parsed()) return kfm::cmd_gifs_check(opt);
  if (oracle->parsed()) return kfm::cmd_oracle_compare(opt);
  std::cerr << "no subcommand\n";
  return 2;
}
