#pragma once

// Finite-difference oracles and small helpers shared by the test suites.

#include "croof/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>

namespace croof::testing {

inline constexpr double kFdStep = 1e-5;

/// Central differences in the complex-combined convention
/// d/dRe z_j + i d/dIm z_j, for any dense complex shape.
template <class M>
M fd_complex_gradient(const std::function<double(const M&)>& f, const M& z, double h = kFdStep) {
  M g(z.rows(), z.cols());
  M w = z;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const Complex orig = w(i);
    w(i) = orig + h;
    const double fr_p = f(w);
    w(i) = orig - h;
    const double fr_m = f(w);
    w(i) = orig + Complex(0.0, h);
    const double fi_p = f(w);
    w(i) = orig - Complex(0.0, h);
    const double fi_m = f(w);
    w(i) = orig;
    g(i) = Complex((fr_p - fr_m) / (2 * h), (fi_p - fi_m) / (2 * h));
  }
  return g;
}

inline RealVector fd_real_gradient(const std::function<double(const RealVector&)>& f, const RealVector& x, double h = kFdStep) {
  RealVector g(x.size());
  RealVector w = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    w(i) = x(i) + h;
    const double fp = f(w);
    w(i) = x(i) - h;
    const double fm = f(w);
    w(i) = x(i);
    g(i) = (fp - fm) / (2 * h);
  }
  return g;
}

template <class A, class B>
double relative_error(const A& analytic, const B& numeric) {
  return (analytic - numeric).norm() / std::max(numeric.norm(), 1e-8);
}

/// -tr(X log2 X) for X = Psi Psi^dag without normalizing psi; independent of
/// the library's entropy code.
inline double raw_entanglement_entropy(const ComplexVector& psi, int d1, int d2) {
  ComplexMatrix m(d1, d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) m(i, j) = psi(i * d2 + j);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m * m.adjoint(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 0.0) s -= l * std::log2(l);
  }
  return s;
}

}  // namespace croof::testing
