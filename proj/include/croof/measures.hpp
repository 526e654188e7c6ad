#pragma once

// Pure-state entanglement monotones and their gradients.
//
// Gradients follow the complex-combined convention
//   [grad m]_j = dm/dRe psi_j + i dm/dIm psi_j
// and are derivatives of the formula evaluated on the raw amplitude vector
// (no implicit renormalization), which is what the convex-sum chain rule needs.

#include "croof/linalg.hpp"
#include "croof/types.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace croof {

namespace detail {

inline void require_bipartite(const ComplexVector& psi, const SubsystemShape& shape, const char* who) {
  if (shape.size() != 2) throw std::invalid_argument(std::string(who) + ": shape must have exactly two subsystems");
  if (psi.size() != shape.total()) throw std::invalid_argument(std::string(who) + ": state dimension does not match shape");
}

inline void require_normalized(const ComplexVector& psi, const char* who) {
  if (std::abs(psi.norm() - 1.0) > 1e-8) throw std::invalid_argument(std::string(who) + ": state is not normalized");
}

// psi reshaped to d1 x d2 with Psi(i, j) = psi[i * d2 + j]
inline ComplexMatrix as_bipartite(const ComplexVector& psi, int d1, int d2) {
  ComplexMatrix m(d1, d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) m(i, j) = psi(i * d2 + j);
  return m;
}

inline int qubit_count(Eigen::Index dim, const char* who) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim || n == 0) throw std::invalid_argument(std::string(who) + ": dimension is not a power of 2");
  return n;
}

}  // namespace detail

/// Entropy of entanglement (base 2) across a bipartition.
inline double entropyOfEntanglement(const ComplexVector& psi, const SubsystemShape& shape) {
  detail::require_bipartite(psi, shape, "entropyOfEntanglement");
  detail::require_normalized(psi, "entropyOfEntanglement");
  const ComplexMatrix m = detail::as_bipartite(psi, shape[0], shape[1]);
  const ComplexMatrix reduced = m * m.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(reduced, Eigen::EigenvaluesOnly);
  double e = 0.0;
  for (double mu : es.eigenvalues())
    if (mu > 0.0) e -= mu * std::log2(mu);
  return std::max(e, 0.0);
}

/// Gradient of entropyOfEntanglement. With X = tr_B |psi><psi| the natural-log
/// derivative is 2 (-log X - I) Psi; it is rescaled by 1/ln 2 to match the
/// base-2 value. Reduced eigenvalues below 1e-14 are clamped before the log and
/// reported through `nonsmooth`.
inline ComplexGradient grad_entropyOfEntanglement(const ComplexVector& psi, const SubsystemShape& shape,
                                                  bool* nonsmooth = nullptr) {
  detail::require_bipartite(psi, shape, "grad_entropyOfEntanglement");
  detail::require_normalized(psi, "grad_entropyOfEntanglement");
  const int d1 = shape[0], d2 = shape[1];
  const ComplexMatrix m = detail::as_bipartite(psi, d1, d2);
  const ComplexMatrix reduced = m * m.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(reduced);
  RealVector logs(d1);
  bool clamped = false;
  for (int i = 0; i < d1; ++i) {
    double mu = es.eigenvalues()(i);
    if (mu < 1e-14) {
      mu = 1e-14;
      clamped = true;
    }
    logs(i) = std::log(mu);
  }
  if (nonsmooth) *nonsmooth = clamped;
  const ComplexMatrix& v = es.eigenvectors();
  const ComplexMatrix s_grad = -(v * logs.cast<Complex>().asDiagonal() * v.adjoint()) - ComplexMatrix::Identity(d1, d1);
  const ComplexMatrix g = (2.0 / std::numbers::ln2) * (s_grad * m);
  ComplexGradient out(psi.size());
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) out(i * d2 + j) = g(i, j);
  return out;
}

namespace detail {

// Three-tangle polynomial D = d1 - 2 d2 + 4 d3 in 0-based amplitudes a0..a7.
// Amplitudes pair up as (0,7), (1,6), (2,5), (3,4); d1 sums squared pair
// products, d2 sums products of distinct pairs, d3 = a0 a3 a5 a6 + a1 a2 a4 a7.
inline constexpr std::array<std::array<int, 2>, 4> tangle_pairs{{{0, 7}, {1, 6}, {2, 5}, {3, 4}}};
inline constexpr std::array<std::array<int, 4>, 2> tangle_quads{{{0, 3, 5, 6}, {1, 2, 4, 7}}};

inline Complex tangle_polynomial(const ComplexVector& a) {
  std::array<Complex, 4> p;
  for (std::size_t m = 0; m < 4; ++m) p[m] = a(tangle_pairs[m][0]) * a(tangle_pairs[m][1]);
  Complex d1 = 0.0, d2 = 0.0, d3 = 0.0;
  for (std::size_t m = 0; m < 4; ++m) {
    d1 += p[m] * p[m];
    for (std::size_t n = m + 1; n < 4; ++n) d2 += p[m] * p[n];
  }
  for (const auto& q : tangle_quads) d3 += a(q[0]) * a(q[1]) * a(q[2]) * a(q[3]);
  return d1 - 2.0 * d2 + 4.0 * d3;
}

// Holomorphic derivative dD/da_n.
inline ComplexVector tangle_polynomial_derivative(const ComplexVector& a) {
  std::array<Complex, 4> p;
  Complex total = 0.0;
  for (std::size_t m = 0; m < 4; ++m) {
    p[m] = a(tangle_pairs[m][0]) * a(tangle_pairs[m][1]);
    total += p[m];
  }
  ComplexVector dd = ComplexVector::Zero(8);
  for (std::size_t m = 0; m < 4; ++m) {
    // d/dP_m of (sum P^2 - 2 sum_{m<n} P_m P_n) = 2 P_m - 2 (total - P_m)
    const Complex dp = 2.0 * p[m] - 2.0 * (total - p[m]);
    dd(tangle_pairs[m][0]) += dp * a(tangle_pairs[m][1]);
    dd(tangle_pairs[m][1]) += dp * a(tangle_pairs[m][0]);
  }
  for (const auto& q : tangle_quads)
    for (int s = 0; s < 4; ++s) {
      Complex prod = 4.0;
      for (int t = 0; t < 4; ++t)
        if (t != s) prod *= a(q[static_cast<std::size_t>(t)]);
      dd(q[static_cast<std::size_t>(s)]) += prod;
    }
  return dd;
}

inline void require_three_qubits(const ComplexVector& psi, const char* who) {
  if (psi.size() != 8) throw std::invalid_argument(std::string(who) + ": state must have dimension 8");
}

}  // namespace detail

/// Three-tangle 4|d1 - 2 d2 + 4 d3| of a three-qubit state.
inline double tangle(const ComplexVector& psi) {
  detail::require_three_qubits(psi, "tangle");
  return 4.0 * std::abs(detail::tangle_polynomial(psi));
}

/// Gradient of tangle: 4 conj(dD/dpsi) D / |D|. Where |D| < 1e-14 the tangle
/// sits at its minimum 0 and is not differentiable; the zero vector (an
/// element of the subdifferential) is returned and `nonsmooth` is set.
inline ComplexGradient grad_tangle(const ComplexVector& psi, bool* nonsmooth = nullptr) {
  detail::require_three_qubits(psi, "grad_tangle");
  const Complex d = detail::tangle_polynomial(psi);
  const double ad = std::abs(d);
  if (nonsmooth) *nonsmooth = ad < 1e-14;
  if (ad < 1e-14) return ComplexGradient::Zero(8);
  return (4.0 / ad) * (detail::tangle_polynomial_derivative(psi).conjugate() * d);
}

/// Single-qubit reduced density matrices rho_k, qubit 0 most significant.
inline std::vector<Eigen::Matrix2cd> single_qubit_marginals(const ComplexVector& psi, int n_qubits) {
  const Eigen::Index dim = psi.size();
  std::vector<Eigen::Matrix2cd> out(static_cast<std::size_t>(n_qubits), Eigen::Matrix2cd::Zero());
  for (int k = 0; k < n_qubits; ++k) {
    const Eigen::Index bit = Eigen::Index{1} << (n_qubits - 1 - k);
    auto& rk = out[static_cast<std::size_t>(k)];
    for (Eigen::Index n = 0; n < dim; ++n) {
      if (n & bit) continue;
      const Complex a0 = psi(n), a1 = psi(n | bit);
      rk(0, 0) += a0 * std::conj(a0);
      rk(0, 1) += a0 * std::conj(a1);
      rk(1, 0) += a1 * std::conj(a0);
      rk(1, 1) += a1 * std::conj(a1);
    }
  }
  return out;
}

/// Meyer-Wallach measure 2[1 - (1/N) sum_k tr rho_k^2] of an N-qubit state.
inline double meyer_wallach(const ComplexVector& psi, int n_qubits) {
  if (detail::qubit_count(psi.size(), "meyer_wallach") != n_qubits)
    throw std::invalid_argument("meyer_wallach: dimension does not match qubit count");
  double purity = 0.0;
  for (const auto& rk : single_qubit_marginals(psi, n_qubits)) purity += (rk * rk).trace().real();
  return 2.0 * (1.0 - purity / n_qubits);
}

inline ComplexGradient grad_meyer_wallach(const ComplexVector& psi, int n_qubits) {
  if (detail::qubit_count(psi.size(), "grad_meyer_wallach") != n_qubits)
    throw std::invalid_argument("grad_meyer_wallach: dimension does not match qubit count");
  const auto marginals = single_qubit_marginals(psi, n_qubits);
  ComplexGradient g = ComplexGradient::Zero(psi.size());
  for (int k = 0; k < n_qubits; ++k) {
    const Eigen::Index bit = Eigen::Index{1} << (n_qubits - 1 - k);
    const auto& rk = marginals[static_cast<std::size_t>(k)];
    for (Eigen::Index n = 0; n < psi.size(); ++n) {
      const int nk = (n & bit) ? 1 : 0;
      g(n) += psi(n & ~bit) * rk(nk, 0) + psi(n | bit) * rk(nk, 1);
    }
  }
  return (-8.0 / n_qubits) * g;
}

inline double binary_entropy(double x) {
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

/// Two-qubit concurrence max(0, l1 - l2 - l3 - l4), l_i the decreasing square
/// roots of the eigenvalues of rho (sy x sy) rho^* (sy x sy).
inline double concurrence2x2(const ComplexMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw std::invalid_argument("eof2x2: density matrix must be 4x4");
  if (hermiticity_defect(rho) > 1e-10) throw std::invalid_argument("eof2x2: matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-8) throw std::invalid_argument("eof2x2: trace is not 1");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-8) throw std::invalid_argument("eof2x2: matrix is not positive semidefinite");

  // sqrt(rho) * rho_tilde * sqrt(rho) is Hermitian PSD with the same spectrum
  // as rho * rho_tilde.
  const RealVector w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix sqrt_rho = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  ComplexMatrix yy = ComplexMatrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const ComplexMatrix rho_tilde = yy * rho.conjugate() * yy;
  ComplexMatrix r = sqrt_rho * rho_tilde * sqrt_rho;
  r = 0.5 * (r + r.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> rs(r, Eigen::EigenvaluesOnly);
  RealVector l = rs.eigenvalues().cwiseMax(0.0).cwiseSqrt();  // ascending
  return std::max(0.0, l(3) - l(2) - l(1) - l(0));
}

/// Closed-form two-qubit entanglement of formation.
inline double eof2x2(const ComplexMatrix& rho) {
  const double c = std::min(concurrence2x2(rho), 1.0);
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

/// A pure-state monotone together with its complex-combined gradient.
struct MeasureHandle {
  std::string name;
  std::function<double(const ComplexVector&)> evaluate;
  std::function<ComplexGradient(const ComplexVector&)> gradient;
};

inline MeasureHandle entropy_measure(const SubsystemShape& shape) {
  if (shape.size() != 2) throw std::invalid_argument("entropy measure needs a bipartite shape");
  return {"entropy", [shape](const ComplexVector& psi) { return entropyOfEntanglement(psi, shape); },
          [shape](const ComplexVector& psi) { return grad_entropyOfEntanglement(psi, shape); }};
}

inline MeasureHandle tangle_measure() {
  return {"tangle", [](const ComplexVector& psi) { return tangle(psi); },
          [](const ComplexVector& psi) { return grad_tangle(psi); }};
}

inline MeasureHandle meyer_wallach_measure(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("meyer-wallach measure needs at least one qubit");
  return {"meyer-wallach", [n_qubits](const ComplexVector& psi) { return meyer_wallach(psi, n_qubits); },
          [n_qubits](const ComplexVector& psi) { return grad_meyer_wallach(psi, n_qubits); }};
}

/// Name -> measure factory. The factory receives the subsystem structure of
/// the states the measure will be applied to.
class MeasureRegistry {
public:
  using Factory = std::function<MeasureHandle(const SubsystemShape&)>;

  MeasureRegistry() {
    add("entropy", [](const SubsystemShape& s) { return entropy_measure(s); });
    add("tangle", [](const SubsystemShape& s) {
      if (s.total() != 8) throw std::invalid_argument("tangle requires a three-qubit (dimension 8) state space");
      return tangle_measure();
    });
    add("meyer-wallach", [](const SubsystemShape& s) {
      for (int d : s.dims())
        if (d != 2) throw std::invalid_argument("meyer-wallach requires qubit subsystems");
      return meyer_wallach_measure(s.size());
    });
  }

  void add(std::string name, Factory factory) { factories_[std::move(name)] = std::move(factory); }

  /// Registers a user-defined evaluate/gradient pair that ignores the shape.
  void add(MeasureHandle handle) {
    auto name = handle.name;
    add(std::move(name), [h = std::move(handle)](const SubsystemShape&) { return h; });
  }

  bool contains(const std::string& name) const { return factories_.count(name) != 0; }

  MeasureHandle create(const std::string& name, const SubsystemShape& shape) const {
    auto it = factories_.find(name);
    if (it == factories_.end()) throw std::invalid_argument("unknown measure '" + name + "'");
    return it->second(shape);
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [n, f] : factories_) out.push_back(n);
    return out;
  }

private:
  std::map<std::string, Factory> factories_;
};

}  // namespace croof
