#pragma once

// Benchmark states with closed-form convex roofs.

#include "croof/measures.hpp"
#include "croof/types.hpp"

#include <cmath>
#include <stdexcept>

namespace croof {

/// (1/sqrt d) sum_i |ii>
inline ComplexVector maximally_entangled_state(int d) {
  if (d < 1) throw std::invalid_argument("maximally_entangled_state: d must be positive");
  ComplexVector psi = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return psi;
}

/// rho_f = (1-f)/(d^2-1) (I - |psi+><psi+|) + f |psi+><psi+|
inline ComplexMatrix isotropic_state(int d, double f) {
  if (d < 2) throw std::invalid_argument("isotropic_state: d must be at least 2");
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("isotropic_state: f must lie in [0, 1]");
  const ComplexVector psi = maximally_entangled_state(d);
  const ComplexMatrix proj = psi * psi.adjoint();
  const int n = d * d;
  return (1.0 - f) / (n - 1.0) * (ComplexMatrix::Identity(n, n) - proj) + f * proj;
}

/// Entanglement of formation of the isotropic state (Terhal-Vollbrecht):
/// zero for f <= 1/d, H2(g) + (1-g) log2(d-1) with
/// g = (sqrt f + sqrt((d-1)(1-f)))^2 / d up to f = 4(d-1)/d^2, then the
/// straight line to log2 d at f = 1.
inline double eofIsotropic(double f, int d) {
  if (d < 2) throw std::invalid_argument("eofIsotropic: d must be at least 2");
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("eofIsotropic: f must lie in [0, 1]");
  if (f <= 1.0 / d) return 0.0;
  const double dd = d;
  if (d == 2 || f <= 4.0 * (dd - 1.0) / (dd * dd)) {
    const double s = std::sqrt(f) + std::sqrt((dd - 1.0) * (1.0 - f));
    const double g = std::min(s * s / dd, 1.0);
    return binary_entropy(g) + (1.0 - g) * std::log2(dd - 1.0);
  }
  return dd * std::log2(dd - 1.0) / (dd - 2.0) * (f - 1.0) + std::log2(dd);
}

inline ComplexVector ghz_state(int n_qubits = 3) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  ComplexVector psi = ComplexVector::Zero(dim);
  psi(0) = psi(dim - 1) = 1.0 / std::sqrt(2.0);
  return psi;
}

inline ComplexVector w_state(int n_qubits = 3) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  ComplexVector psi = ComplexVector::Zero(dim);
  for (int k = 0; k < n_qubits; ++k) psi(Eigen::Index{1} << k) = 1.0 / std::sqrt(static_cast<double>(n_qubits));
  return psi;
}

/// p |GHZ><GHZ| + (1-p) |W><W| on three qubits.
inline ComplexMatrix ghz_w_mixture(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("ghz_w_mixture: p must lie in [0, 1]");
  const ComplexVector ghz = ghz_state(), w = w_state();
  return p * ghz * ghz.adjoint() + (1.0 - p) * w * w.adjoint();
}

/// Convex-roof three-tangle of the GHZ/W mixture (Lohmayer et al.): zero up
/// to p0 = 4 2^{1/3} / (3 + 4 2^{1/3}), then p^2 - (8 sqrt6 / 9) sqrt(p (1-p)^3)
/// up to p1 = 1/2 + 3 sqrt465 / 310, then linear to 1 at p = 1.
inline double tangleGHZW(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("tangleGHZW: p must lie in [0, 1]");
  const double c = 4.0 * std::cbrt(2.0);
  const double p0 = c / (3.0 + c);
  const double p1 = 0.5 + 3.0 * std::sqrt(465.0) / 310.0;
  if (p <= p0) return 0.0;
  if (p <= p1) return std::max(0.0, p * p - 8.0 * std::sqrt(6.0) / 9.0 * std::sqrt(p * std::pow(1.0 - p, 3)));
  return 1.0 - (1.0 - p) * (1.5 + std::sqrt(465.0) / 18.0);
}

}  // namespace croof
