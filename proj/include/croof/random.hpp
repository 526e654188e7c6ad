#pragma once

#include "croof/types.hpp"

#include <Eigen/QR>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>

namespace croof {

using Rng = std::mt19937_64;

/// Stream for the `index`-th independent job under a master seed (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Matrix of i.i.d. complex standard Gaussians (real and imaginary parts N(0,1)).
inline ComplexMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = n01(rng);
      const double im = n01(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

/// Haar-random pure state.
inline ComplexVector randState(int dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("randState: dimension must be positive");
  ComplexVector psi = complex_gaussian(dim, 1, rng).col(0);
  return psi / psi.norm();
}

/// Haar-random k x r matrix with orthonormal columns: QR of a complex
/// Gaussian with the phases of R's diagonal pushed into Q.
inline ComplexMatrix randUnitaryMatrix(int k, int r, Rng& rng) {
  if (r < 1 || k < r) throw std::invalid_argument("randUnitaryMatrix: need k >= r >= 1");
  const ComplexMatrix g = complex_gaussian(k, r, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(k, r);
  const ComplexMatrix& packed = qr.matrixQR();
  for (int j = 0; j < r; ++j) {
    const Complex d = packed(j, j);
    const double a = std::abs(d);
    q.col(j) *= a > 0.0 ? d / a : Complex(1.0);
  }
  return q;
}

/// rho = G G^dag / tr(G G^dag) with G a dim x rank complex Gaussian matrix.
inline ComplexMatrix randDensityMatrix(int dim, std::optional<int> rank, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("randDensityMatrix: dimension must be positive");
  const int r = rank.value_or(dim);
  if (r < 1 || r > dim) throw std::invalid_argument("randDensityMatrix: need 1 <= rank <= dim");
  const ComplexMatrix g = complex_gaussian(dim, r, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho / rho.trace().real();
}

inline ComplexMatrix randDensityMatrix(int dim, Rng& rng) { return randDensityMatrix(dim, std::nullopt, rng); }

}  // namespace croof
