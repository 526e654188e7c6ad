#pragma once

// End-to-end evaluation of a convex roof: spectral preprocessing, objective
// construction, multi-start minimization and the optimal decomposition.

#include "croof/convex_roof.hpp"
#include "croof/linalg.hpp"
#include "croof/optimize.hpp"
#include "croof/random.hpp"
#include "croof/stiefel.hpp"

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace croof {

enum class Algorithm { cg, bfgs };

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "cg") return Algorithm::cg;
  if (s == "bfgs") return Algorithm::bfgs;
  throw std::invalid_argument("unknown algorithm '" + s + "' (expected cg or bfgs)");
}

inline std::string_view to_string(Algorithm a) { return a == Algorithm::cg ? "cg" : "bfgs"; }

struct SolveOptions {
  Algorithm algorithm = Algorithm::cg;
  std::optional<int> k;           // cardinality; defaults to r + offset
  int offset = 4;                 // k = r + offset when k is unset
  std::optional<int> max_rank;    // keep only the leading eigenpairs of rho
  double truncation_tol = 1e-12;
  TerminationOptions termination;
  int restarts = 5;
  std::uint64_t seed = 0;
  int bfgs_reset_interval = 10;
  // called after every restart with its index, trace and termination status
  std::function<void(int, const std::vector<double>&, TerminationStatus)> on_run;
};

struct ConvexRoofSolution {
  double value = 0.0;
  TerminationStatus status = TerminationStatus::max_iter;
  int iterations = 0;
  int k = 0;
  int rank = 0;
  std::vector<double> fvals;  // trace of the best run
  PureStateDecomposition decomposition;
};

inline int resolve_cardinality(const SolveOptions& opts, int rank) {
  const int k = opts.k.value_or(rank + opts.offset);
  if (k < rank) throw std::invalid_argument("cardinality k = " + std::to_string(k) + " is below rank(rho) = " + std::to_string(rank));
  return k;
}

inline ConvexRoofSolution solve_convex_roof(const ComplexMatrix& rho, const MeasureHandle& measure, const SolveOptions& opts) {
  SpectralData spectrum = densityEig(rho, {.truncation_tol = opts.truncation_tol, .max_rank = opts.max_rank});
  const int r = spectrum.rank();
  if (r < 1) throw std::invalid_argument("density matrix has no eigenvalue above the truncation tolerance");
  const int k = resolve_cardinality(opts, r);

  ConvexRoofSolution sol;
  sol.k = k;
  sol.rank = r;
  if (opts.algorithm == Algorithm::cg) {
    const auto obj = createConvexFunctions(spectrum, measure);
    CgOptions cg;
    cg.termination = opts.termination;
    cg.record_points = false;
    const auto best = best_of<ComplexMatrix>(opts.restarts, opts.seed, [&](Rng& rng, int i) {
      auto res = cg_min(obj, randUnitaryMatrix(k, k, rng), cg);
      if (opts.on_run) opts.on_run(i, res.fvals, res.status);
      return res;
    });
    sol.value = best.value;
    sol.status = best.status;
    sol.iterations = best.iterations;
    sol.fvals = best.fvals;
    sol.decomposition = psDecomposition(best.point, spectrum);
  } else {
    const StiefelChart chart(k, r);
    const auto obj = createEHFunctions(spectrum, k, measure);
    BfgsOptions bo;
    bo.termination = opts.termination;
    bo.reset_interval = opts.bfgs_reset_interval;
    bo.record_points = false;
    const auto best = best_of<RealVector>(opts.restarts, opts.seed, [&](Rng& rng, int i) {
      std::normal_distribution<double> n01(0.0, 1.0);
      RealVector x0(chart.dim());
      for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = 2.0 * std::numbers::pi * n01(rng);
      auto res = bfgs_min(obj, x0, bo);
      if (opts.on_run) opts.on_run(i, res.fvals, res.status);
      return res;
    });
    sol.value = best.value;
    sol.status = best.status;
    sol.iterations = best.iterations;
    sol.fvals = best.fvals;
    sol.decomposition = psDecomposition(buildUnitary(best.point, chart), spectrum);
  }
  return sol;
}

}  // namespace croof
