#pragma once

// Command implementations behind the croof executable. Argument parsing lives
// in the tool; everything here takes plain values and writes a text report.

#include "croof/cmat_io.hpp"
#include "croof/measures.hpp"
#include "croof/random.hpp"
#include "croof/references.hpp"
#include "croof/solve.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace croof::cli {

enum ExitCode : int { converged = 0, failure = 1, iteration_limit = 2 };

struct RunConfig {
  std::string rho_path;
  std::string measure = "entropy";
  Algorithm algorithm = Algorithm::cg;
  std::optional<int> k;
  std::optional<int> offset;
  std::optional<int> rank;
  std::vector<int> dims;  // subsystem dimensions; empty selects the measure's default
  TerminationOptions termination;
  int restarts = 5;
  std::uint64_t seed = 0;
  std::string trace_path;
  std::string decomposition_path;
};

struct ReferenceSolution {
  std::string name;
  std::string parameters;
  double exact_value = 0.0;
};

struct Report {
  ConvexRoofSolution solution;
  std::optional<ReferenceSolution> reference;
  int exit_code = converged;
};

/// Shortest decimal string that reads back to the same double.
inline std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Subsystem structure for `measure` on a d-dimensional space.
inline SubsystemShape measure_shape(const std::string& measure, int d, const std::vector<int>& dims) {
  if (!dims.empty()) {
    SubsystemShape s(dims);
    if (s.total() != d)
      throw std::invalid_argument("--dims multiply to " + std::to_string(s.total()) + " but rho has dimension " + std::to_string(d));
    return s;
  }
  if (measure == "entropy") {
    const int a = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
    if (a * a != d) throw std::invalid_argument("entropy on dimension " + std::to_string(d) + " needs --dims a,b");
    return SubsystemShape{a, a};
  }
  int n = 0;
  while ((1 << n) < d) ++n;
  if ((1 << n) != d) throw std::invalid_argument("dimension " + std::to_string(d) + " is not a power of two; pass --dims");
  return SubsystemShape::qubits(n);
}

inline SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions o;
  o.algorithm = cfg.algorithm;
  o.k = cfg.k;
  if (cfg.offset) o.offset = *cfg.offset;
  o.max_rank = cfg.rank;
  o.termination = cfg.termination;
  o.restarts = cfg.restarts;
  o.seed = cfg.seed;
  return o;
}

/// CSV "iter,fval" (plus ",error" against a reference value).
inline void write_trace(std::ostream& os, const std::vector<double>& fvals, std::optional<double> reference = std::nullopt) {
  os << (reference ? "iter,fval,error\n" : "iter,fval\n");
  for (std::size_t i = 0; i < fvals.size(); ++i) {
    os << i << ',' << fmt(fvals[i]);
    if (reference) os << ',' << fmt(std::abs(fvals[i] - *reference));
    os << '\n';
  }
}

/// cmat of the states (one column per psi_i) followed by the weights on one line.
inline void write_decomposition(std::ostream& os, const PureStateDecomposition& dec) {
  write_cmat(os, dec.states);
  for (Eigen::Index i = 0; i < dec.probabilities.size(); ++i) os << (i ? " " : "") << fmt(dec.probabilities(i));
  os << '\n';
}

namespace detail {

inline void write_file(const std::string& path, const auto& writer) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  writer(out);
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

inline Report run(const ComplexMatrix& rho, const MeasureHandle& measure, const RunConfig& cfg,
                  std::optional<ReferenceSolution> reference, std::ostream& os) {
  Report rep;
  rep.reference = std::move(reference);
  rep.solution = solve_convex_roof(rho, measure, solve_options(cfg));
  const auto& s = rep.solution;
  rep.exit_code = s.status == TerminationStatus::max_iter ? iteration_limit : converged;

  os << "measure " << measure.name << '\n';
  os << "algorithm " << to_string(cfg.algorithm) << '\n';
  os << "rank " << s.rank << "\nk " << s.k << '\n';
  os << "value " << fmt(s.value) << '\n';
  if (rep.reference) {
    os << "reference " << fmt(rep.reference->exact_value) << " (" << rep.reference->name << ", " << rep.reference->parameters << ")\n";
    os << "error " << fmt(std::abs(s.value - rep.reference->exact_value)) << '\n';
  }
  os << "status " << to_string(s.status) << '\n';
  os << "iterations " << s.iterations << '\n';

  const std::optional<double> ref = rep.reference ? std::optional(rep.reference->exact_value) : std::nullopt;
  if (!cfg.trace_path.empty()) write_file(cfg.trace_path, [&](std::ostream& o) { write_trace(o, s.fvals, ref); });
  if (!cfg.decomposition_path.empty())
    write_file(cfg.decomposition_path, [&](std::ostream& o) { write_decomposition(o, s.decomposition); });
  return rep;
}

}  // namespace detail

inline Report cmd_eval(const RunConfig& cfg, std::ostream& os, const MeasureRegistry& registry = {}) {
  if (cfg.rho_path.empty()) throw std::invalid_argument("eval needs --rho <path>");
  const ComplexMatrix rho = load_cmat(cfg.rho_path);
  if (rho.rows() != rho.cols()) throw std::invalid_argument("rho must be square");
  const auto shape = measure_shape(cfg.measure, static_cast<int>(rho.rows()), cfg.dims);
  return detail::run(rho, registry.create(cfg.measure, shape), cfg, std::nullopt, os);
}

/// Isotropic state in d x d with the entropy measure. Without --k or --n the
/// cardinality is k = 2r.
inline Report cmd_example_isotropic(int d, double f, RunConfig cfg, std::ostream& os) {
  const ComplexMatrix rho = isotropic_state(d, f);
  if (!cfg.k && !cfg.offset) cfg.k = 2 * densityEig(rho, {.max_rank = cfg.rank}).rank();
  ReferenceSolution ref{"isotropic EoF", "d=" + std::to_string(d) + " f=" + fmt(f), eofIsotropic(f, d)};
  return detail::run(rho, entropy_measure(SubsystemShape{d, d}), cfg, ref, os);
}

/// GHZ/W mixture with the three-tangle; default cardinality k = r + 4.
inline Report cmd_example_ghzw(double p, const RunConfig& cfg, std::ostream& os) {
  ReferenceSolution ref{"GHZ/W three-tangle", "p=" + fmt(p), tangleGHZW(p)};
  return detail::run(ghz_w_mixture(p), tangle_measure(), cfg, ref, os);
}

/// Random density matrix of the given rank written as cmat.
inline ComplexMatrix cmd_rand_rho(int dim, std::optional<int> rank, std::uint64_t seed, const std::string& path) {
  if (dim < 1) throw std::invalid_argument("rand-rho: dimension must be positive");
  Rng rng(seed);
  const ComplexMatrix rho = randDensityMatrix(dim, rank, rng);
  save_cmat(path, rho);
  return rho;
}

}  // namespace croof::cli
