#pragma once

#include "croof/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace croof {

enum class TraceMode { trace_out, keep };

namespace detail {

// Flat offsets of every multi-index over `which` subsystems, row-major.
inline std::vector<Eigen::Index> subsystem_offsets(const SubsystemShape& shape, const std::vector<int>& which) {
  const int n = shape.size();
  std::vector<Eigen::Index> stride(static_cast<std::size_t>(n));
  Eigen::Index s = 1;
  for (int i = n - 1; i >= 0; --i) {
    stride[static_cast<std::size_t>(i)] = s;
    s *= shape[i];
  }
  std::vector<Eigen::Index> offsets{0};
  for (int sub : which) {
    std::vector<Eigen::Index> next;
    next.reserve(offsets.size() * static_cast<std::size_t>(shape[sub]));
    for (Eigen::Index base : offsets)
      for (int v = 0; v < shape[sub]; ++v) next.push_back(base + v * stride[static_cast<std::size_t>(sub)]);
    offsets = std::move(next);
  }
  return offsets;
}

}  // namespace detail

/// Partial trace of `rho` over the subsystems listed in `subsystems` (0-based),
/// or over their complement when `mode == TraceMode::keep`. Retained
/// subsystems keep their relative order.
inline ComplexMatrix pTrace(const ComplexMatrix& rho, const SubsystemShape& shape, std::span<const int> subsystems,
                            TraceMode mode = TraceMode::trace_out) {
  if (rho.rows() != rho.cols() || rho.rows() != shape.total())
    throw std::invalid_argument("pTrace: matrix dimension does not match subsystem shape");
  std::vector<bool> selected(static_cast<std::size_t>(shape.size()), false);
  for (int s : subsystems) {
    if (s < 0 || s >= shape.size()) throw std::invalid_argument("pTrace: subsystem index out of range");
    if (selected[static_cast<std::size_t>(s)]) throw std::invalid_argument("pTrace: duplicate subsystem index");
    selected[static_cast<std::size_t>(s)] = true;
  }
  std::vector<int> kept, traced;
  for (int s = 0; s < shape.size(); ++s) {
    const bool keep = (mode == TraceMode::keep) == selected[static_cast<std::size_t>(s)];
    (keep ? kept : traced).push_back(s);
  }
  if (kept.empty()) throw std::invalid_argument("pTrace: no subsystem retained");

  const auto kept_off = detail::subsystem_offsets(shape, kept);
  const auto traced_off = detail::subsystem_offsets(shape, traced);
  const auto dk = static_cast<Eigen::Index>(kept_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a)
    for (Eigen::Index b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (Eigen::Index t : traced_off) acc += rho(kept_off[static_cast<std::size_t>(a)] + t, kept_off[static_cast<std::size_t>(b)] + t);
      out(a, b) = acc;
    }
  return out;
}

inline ComplexMatrix pTrace(const ComplexMatrix& rho, const SubsystemShape& shape, std::initializer_list<int> subsystems,
                            TraceMode mode = TraceMode::trace_out) {
  return pTrace(rho, shape, std::span<const int>(subsystems.begin(), subsystems.size()), mode);
}

struct DensityEigOptions {
  double truncation_tol = 1e-12;
  std::optional<int> max_rank;
};

/// Nonzero eigenpairs of a density matrix sorted by decreasing eigenvalue.
/// Degenerate eigenspaces come back in whatever basis the solver picks.
inline SpectralData densityEig(const ComplexMatrix& rho, const DensityEigOptions& opts = {}) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw std::invalid_argument("densityEig: matrix must be square");
  if (hermiticity_defect(rho) > 1e-10) throw std::invalid_argument("densityEig: matrix is not Hermitian");
  if (opts.max_rank && *opts.max_rank < 1) throw std::invalid_argument("densityEig: max_rank must be positive");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
  if (es.info() != Eigen::Success) throw std::runtime_error("densityEig: eigensolver failed");
  const RealVector& w = es.eigenvalues();  // ascending
  if (w(0) < -1e-8) throw std::domain_error("densityEig: matrix has a significantly negative eigenvalue");

  const Eigen::Index n = w.size();
  Eigen::Index r = 0;
  while (r < n && w(n - 1 - r) > opts.truncation_tol) ++r;
  if (opts.max_rank) r = std::min<Eigen::Index>(r, *opts.max_rank);

  SpectralData out;
  out.eigenvalues.resize(r);
  out.eigenvectors.resize(n, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    out.eigenvalues(i) = w(n - 1 - i);
    out.eigenvectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

/// Re-orthonormalizes the columns of a nearly unitary (or nearly Stiefel)
/// matrix by Gram-Schmidt with one reorthogonalization pass.
inline ComplexMatrix completeGramSchmidt(const ComplexMatrix& u) {
  if (u.cols() > u.rows()) throw std::invalid_argument("completeGramSchmidt: more columns than rows");
  ComplexMatrix q = u;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const double original = q.col(j).norm();
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    const double nrm = q.col(j).norm();
    if (!(nrm > 1e-10 * std::max(original, 1.0))) throw std::domain_error("completeGramSchmidt: rank-deficient input");
    q.col(j) /= nrm;
  }
  return q;
}

/// exp(tX) for anti-Hermitian X, factorized once and evaluated for any t.
/// Uses iX = V diag(w) V^dag, so exp(tX) = V diag(exp(-i t w)) V^dag.
class AntiHermitianExp {
public:
  explicit AntiHermitianExp(const ComplexMatrix& x) {
    if (x.rows() != x.cols()) throw std::invalid_argument("expm_antihermitian: matrix must be square");
    if (max_abs(x + x.adjoint()) > 1e-10) throw std::invalid_argument("expm_antihermitian: matrix is not anti-Hermitian");
    const ComplexMatrix h = Complex(0.0, 1.0) * x;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("expm_antihermitian: eigensolver failed");
    freq_ = es.eigenvalues();
    basis_ = es.eigenvectors();
    basis_.colwise().normalize();
  }

  ComplexMatrix operator()(double t) const {
    ComplexVector phases(freq_.size());
    for (Eigen::Index i = 0; i < freq_.size(); ++i) phases(i) = std::polar(1.0, -t * freq_(i));
    return basis_ * phases.asDiagonal() * basis_.adjoint();
  }

private:
  RealVector freq_;
  ComplexMatrix basis_;
};

inline ComplexMatrix expm_antihermitian(const ComplexMatrix& x, double t) { return AntiHermitianExp(x)(t); }

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Frobenius inner product Re tr(X Y^dag).
inline double real_inner(const ComplexMatrix& x, const ComplexMatrix& y) { return (x.array() * y.array().conjugate()).sum().real(); }

}  // namespace croof
