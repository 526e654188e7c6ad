#pragma once

// Pure-state decompositions parameterized by Stiefel matrices and the
// convex-sum objective h(U) = sum_i p_i(U) m(psi_i(U)).
//
// For rho = sum_j lambda_j |chi_j><chi_j| (rank r) and a k x r matrix U the
// decomposition is psi~_i = sum_j U_ij sqrt(lambda_j) chi_j, p_i = <psi~_i|psi~_i>,
// psi_i = psi~_i / sqrt(p_i). Matrices with more than r columns are accepted
// and only their first r columns are used.

#include "croof/linalg.hpp"
#include "croof/measures.hpp"
#include "croof/types.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>

namespace croof {

/// Weights below this are treated as absent terms.
inline constexpr double kNegligibleWeight = 1e-14;

struct PureStateDecomposition {
  RealVector probabilities;  // length k
  ComplexMatrix states;      // d x k, column i is psi_i
};

template <class Point, class Gradient>
struct ObjectivePair {
  std::function<double(const Point&)> value;
  std::function<Gradient(const Point&)> gradient;
};

using UnitaryObjective = ObjectivePair<ComplexMatrix, ComplexMatrix>;

namespace detail {

inline void require_columns(const ComplexMatrix& u, const SpectralData& spectrum, const char* who) {
  if (u.cols() < spectrum.rank()) throw std::invalid_argument(std::string(who) + ": parameter matrix has fewer columns than rank(rho)");
}

// Unnormalized auxiliary states psi~ as columns (d x k).
inline ComplexMatrix auxiliary_states(const ComplexMatrix& u, const SpectralData& spectrum) {
  const int r = spectrum.rank();
  const ComplexMatrix weighted = spectrum.eigenvectors * spectrum.eigenvalues.cwiseSqrt().cast<Complex>().asDiagonal();
  return weighted * u.leftCols(r).transpose();
}

// Decomposition without checking U's orthonormality; used by the objective,
// which is defined for arbitrary U.
inline PureStateDecomposition decompose(const ComplexMatrix& u, const SpectralData& spectrum) {
  PureStateDecomposition out;
  out.states = auxiliary_states(u, spectrum);
  out.probabilities.resize(out.states.cols());
  for (Eigen::Index i = 0; i < out.states.cols(); ++i) {
    const double p = out.states.col(i).squaredNorm();
    out.probabilities(i) = p;
    if (p > 0.0)
      out.states.col(i) /= std::sqrt(p);
    else
      out.states.col(i) = spectrum.eigenvectors.col(0);
  }
  return out;
}

}  // namespace detail

/// Decomposition {p_i, psi_i} of rho selected by U. Zero-weight rows yield a
/// normalized placeholder state (the leading eigenvector) with p_i = 0.
inline PureStateDecomposition psDecomposition(const ComplexMatrix& u, const SpectralData& spectrum) {
  detail::require_columns(u, spectrum, "psDecomposition");
  if (orthonormality_defect(u.leftCols(spectrum.rank())) > 1e-8)
    throw std::invalid_argument("psDecomposition: leading columns are not orthonormal");
  return detail::decompose(u, spectrum);
}

inline double convexSum(const ComplexMatrix& u, const MeasureHandle& measure, const SpectralData& spectrum) {
  detail::require_columns(u, spectrum, "convexSum");
  const auto dec = detail::decompose(u, spectrum);
  double h = 0.0;
  for (Eigen::Index i = 0; i < dec.probabilities.size(); ++i) {
    const double p = dec.probabilities(i);
    if (p < kNegligibleWeight) continue;
    h += p * measure.evaluate(dec.states.col(i));
  }
  return h;
}

/// Complex-combined gradient dh/dRe U + i dh/dIm U, same shape as U (zero
/// beyond column r). Per entry (a, b):
///   lambda_b U_ab (2 m_a - Re<psi_a|g_a>) + sqrt(p_a lambda_b) <chi_b|g_a>
/// with g_a the measure gradient at psi_a. This is the xi/zeta form of the
/// derivative contracted against g_a. Rows with p_a < 1e-14 are zero.
inline ComplexMatrix grad_convexSum(const ComplexMatrix& u, const MeasureHandle& measure, const SpectralData& spectrum) {
  detail::require_columns(u, spectrum, "grad_convexSum");
  const int r = spectrum.rank();
  const Eigen::Index k = u.rows();
  const auto dec = detail::decompose(u, spectrum);

  ComplexMatrix measure_grads = ComplexMatrix::Zero(spectrum.dim(), k);
  RealVector values = RealVector::Zero(k);
  RealVector radial = RealVector::Zero(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    if (dec.probabilities(a) < kNegligibleWeight) continue;
    const auto psi = dec.states.col(a);
    values(a) = measure.evaluate(psi);
    measure_grads.col(a) = measure.gradient(psi);
    radial(a) = psi.dot(measure_grads.col(a)).real();
  }
  const ComplexMatrix overlaps = spectrum.eigenvectors.adjoint() * measure_grads;  // r x k

  ComplexMatrix g = ComplexMatrix::Zero(k, u.cols());
  for (Eigen::Index a = 0; a < k; ++a) {
    const double p = dec.probabilities(a);
    if (p < kNegligibleWeight) continue;
    for (int b = 0; b < r; ++b) {
      const double lambda = spectrum.eigenvalues(b);
      g(a, b) = lambda * u(a, b) * (2.0 * values(a) - radial(a)) + std::sqrt(p * lambda) * overlaps(b, a);
    }
  }
  return g;
}

inline UnitaryObjective createConvexFunctions(SpectralData spectral, MeasureHandle measure) {
  auto spectrum = std::make_shared<const SpectralData>(std::move(spectral));
  auto m = std::make_shared<const MeasureHandle>(std::move(measure));
  return {[spectrum, m](const ComplexMatrix& u) { return convexSum(u, *m, *spectrum); },
          [spectrum, m](const ComplexMatrix& u) { return grad_convexSum(u, *m, *spectrum); }};
}

/// Spectral preprocessing plus the closed value/gradient pair over U.
inline UnitaryObjective createConvexFunctions(const ComplexMatrix& rho, MeasureHandle measure,
                                              const DensityEigOptions& eig_opts = {}) {
  return createConvexFunctions(densityEig(rho, eig_opts), std::move(measure));
}

}  // namespace croof
