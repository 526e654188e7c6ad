// croof: convex-roof entanglement measures from the command line.
//
//   croof eval --rho state.cmat --measure entropy --algo cg
//   croof example isotropic --d 5 --f 0.3 --trace iso.csv
//   croof example ghzw --p 0.7 --algo bfgs
//   croof rand-rho --dim 8 --rank 3 --seed 1 --out rho.cmat
//
// Exit status: 0 converged, 2 iteration limit reached, 1 on any error.

#include "croof/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace croof;
  cli::RunConfig cfg;
  std::string algo = "cg";

  CLI::App app{"Convex-roof entanglement measures"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key = value file");
  app.add_option("--rho", cfg.rho_path, "Density matrix (cmat file)");
  app.add_option("--measure", cfg.measure, "Pure-state measure")->check(CLI::IsMember(MeasureRegistry{}.names()));
  app.add_option("--algo", algo, "Optimizer")->check(CLI::IsMember({"cg", "bfgs"}));
  auto* k_opt = app.add_option("--k", cfg.k, "Decomposition cardinality")->check(CLI::PositiveNumber);
  app.add_option("--n", cfg.offset, "Cardinality offset, k = rank + n")->check(CLI::NonNegativeNumber)->excludes(k_opt);
  app.add_option("--rank", cfg.rank, "Keep at most this many eigenpairs of rho")->check(CLI::PositiveNumber);
  app.add_option("--dims", cfg.dims, "Subsystem dimensions, e.g. 2,4")->delimiter(',');
  app.add_option("--max-iter", cfg.termination.MaxIter, "Iteration limit")->check(CLI::PositiveNumber);
  app.add_option("--tol-fun", cfg.termination.TolFun, "Stop when |f_i - f_{i-1}| drops below this")->check(CLI::PositiveNumber);
  app.add_option("--tol-g", cfg.termination.TolG, "Stop when the gradient norm drops below this")->check(CLI::PositiveNumber);
  app.add_option("--tol-x", cfg.termination.TolX, "Stop when the step norm drops below this")->check(CLI::PositiveNumber);
  app.add_option("--restarts", cfg.restarts, "Random restarts (best is kept)")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed of the restart streams");
  app.add_option("--trace", cfg.trace_path, "Write the per-iteration objective as CSV");
  app.add_option("--out-decomposition", cfg.decomposition_path, "Write the optimal decomposition");

  auto* eval = app.add_subcommand("eval", "Convex roof of a density matrix read with --rho");

  auto* example = app.add_subcommand("example", "Benchmarks with closed-form values");
  example->require_subcommand(1);
  int d = 5;
  double f = 0.3, p = 0.7;
  auto* iso = example->add_subcommand("isotropic", "Entanglement of formation of the isotropic state");
  iso->add_option("--d", d, "Local dimension")->check(CLI::Range(2, 64));
  iso->add_option("--f", f, "Fidelity with the maximally entangled state")->check(CLI::Range(0.0, 1.0));
  auto* ghzw = example->add_subcommand("ghzw", "Three-tangle of the GHZ/W mixture");
  ghzw->add_option("--p", p, "GHZ weight")->check(CLI::Range(0.0, 1.0));

  auto* rand = app.add_subcommand("rand-rho", "Write a random density matrix");
  int dim = 4;
  std::optional<int> rank;
  std::string out;
  rand->add_option("--dim", dim, "Dimension")->required()->check(CLI::PositiveNumber);
  rand->add_option("--rank", rank, "Rank (default: full)")->check(CLI::PositiveNumber);
  rand->add_option("--out", out, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::failure;
  }

  try {
    cfg.algorithm = parse_algorithm(algo);
    if (*rand) {
      // --rank on the subcommand wins; the global one is for eval
      cli::cmd_rand_rho(dim, rank ? rank : cfg.rank, cfg.seed, out);
      std::cout << "wrote " << out << '\n';
      return cli::converged;
    }
    if (*eval) return cli::cmd_eval(cfg, std::cout).exit_code;
    if (*iso) return cli::cmd_example_isotropic(d, f, cfg, std::cout).exit_code;
    if (*ghzw) return cli::cmd_example_ghzw(p, cfg, std::cout).exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::failure;
  }
  return cli::failure;
}
