#pragma once

// Angle chart of the Stiefel manifold St(k, r).
//
// A real vector X of length 2kr - r^2 is split into theta (first
// r(k - (r+1)/2) entries), phi (same count) and chi (last r entries), and
//
//   U(X) = [ prod_{i=1..r} prod_{j=1..k-i} F_{k-j}(theta_c, phi_c) ] R,
//   c = c_ij = (i-1)(k-i/2) + j,   R = diag(exp(i chi)) padded to k x r,
//
// where F_s acts on rows s, s+1 (1-based) as
//   [ e^{-i phi} cos   -e^{-i phi} sin ]
//   [ e^{ i phi} sin    e^{ i phi} cos ].

#include "croof/convex_roof.hpp"
#include "croof/linalg.hpp"
#include "croof/types.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace croof {

inline int dimSt(int k, int r) {
  if (r < 1 || k < r) throw std::invalid_argument("dimSt: need k >= r >= 1");
  return 2 * k * r - r * r;
}

/// Factor ordering and angle bookkeeping of the chart for fixed (k, r).
class StiefelChart {
public:
  struct Factor {
    int row;    // 0-based upper row s of the 2x2 block
    int angle;  // 0-based index into theta (and phi)
  };

  StiefelChart(int k, int r) : k_(k), r_(r), dim_(dimSt(k, r)) {
    n_angles_ = r * (2 * k - r - 1) / 2;
    std::vector<bool> seen(static_cast<std::size_t>(n_angles_), false);
    for (int i = 1; i <= r; ++i)
      for (int j = 1; j <= k - i; ++j) {
        const double c = (i - 1) * (k - i / 2.0) + j;
        const int ci = static_cast<int>(std::lround(c));
        if (std::abs(c - ci) > 1e-9 || ci < 1 || ci > n_angles_ || seen[static_cast<std::size_t>(ci - 1)])
          throw std::logic_error("StiefelChart: angle index map is not a bijection");
        seen[static_cast<std::size_t>(ci - 1)] = true;
        factors_.push_back({k - j - 1, ci - 1});
      }
    if (static_cast<int>(factors_.size()) != n_angles_) throw std::logic_error("StiefelChart: angle count mismatch");
  }

  int k() const { return k_; }
  int r() const { return r_; }
  int dim() const { return dim_; }
  int angle_count() const { return n_angles_; }
  const std::vector<Factor>& factors() const { return factors_; }

  int theta_index(const Factor& f) const { return f.angle; }
  int phi_index(const Factor& f) const { return n_angles_ + f.angle; }
  int chi_index(int col) const { return 2 * n_angles_ + col; }

  void require_length(const RealVector& x, const char* who) const {
    if (x.size() != dim_) throw std::invalid_argument(std::string(who) + ": angle vector has wrong length");
  }

private:
  int k_, r_, dim_, n_angles_ = 0;
  std::vector<Factor> factors_;
};

namespace detail {

struct Block2 {
  Complex a00, a01, a10, a11;
};

inline Block2 chart_factor(double theta, double phi) {
  const Complex em = std::polar(1.0, -phi), ep = std::polar(1.0, phi);
  const double c = std::cos(theta), s = std::sin(theta);
  return {em * c, -em * s, ep * s, ep * c};
}

inline Block2 chart_factor_dtheta(double theta, double phi) {
  const Complex em = std::polar(1.0, -phi), ep = std::polar(1.0, phi);
  const double c = std::cos(theta), s = std::sin(theta);
  return {-em * s, -em * c, ep * c, -ep * s};
}

inline Block2 chart_factor_dphi(double theta, double phi) {
  const Complex i(0.0, 1.0);
  const Complex em = std::polar(1.0, -phi), ep = std::polar(1.0, phi);
  const double c = std::cos(theta), s = std::sin(theta);
  return {-i * em * c, i * em * s, i * ep * s, i * ep * c};
}

inline Block2 adjoint(const Block2& b) { return {std::conj(b.a00), std::conj(b.a10), std::conj(b.a01), std::conj(b.a11)}; }

// m <- B m on rows (s, s+1)
inline void apply_rows(const Block2& b, ComplexMatrix& m, int s) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const Complex x = m(s, c), y = m(s + 1, c);
    m(s, c) = b.a00 * x + b.a01 * y;
    m(s + 1, c) = b.a10 * x + b.a11 * y;
  }
}

// m <- m B on columns (s, s+1)
inline void apply_cols(const Block2& b, ComplexMatrix& m, int s) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Complex x = m(r, s), y = m(r, s + 1);
    m(r, s) = x * b.a00 + y * b.a10;
    m(r, s + 1) = x * b.a01 + y * b.a11;
  }
}

inline Block2 factor_at(const StiefelChart& chart, const StiefelChart::Factor& f, const RealVector& x) {
  return chart_factor(x(chart.theta_index(f)), x(chart.phi_index(f)));
}

inline ComplexMatrix phase_block(const StiefelChart& chart, const RealVector& x) {
  ComplexMatrix r = ComplexMatrix::Zero(chart.k(), chart.r());
  for (int i = 0; i < chart.r(); ++i) r(i, i) = std::polar(1.0, x(chart.chi_index(i)));
  return r;
}

}  // namespace detail

/// U(X), applying factors right to left onto the k x r phase block.
inline ComplexMatrix buildUnitary(const RealVector& x, const StiefelChart& chart) {
  chart.require_length(x, "buildUnitary");
  ComplexMatrix u = detail::phase_block(chart, x);
  const auto& fs = chart.factors();
  for (auto it = fs.rbegin(); it != fs.rend(); ++it) detail::apply_rows(detail::factor_at(chart, *it, x), u, it->row);
  return u;
}

inline ComplexMatrix buildUnitary(const RealVector& x, int k, int r) { return buildUnitary(x, StiefelChart(k, r)); }

/// dU/dX_m for every coordinate m, by the product rule (the factor carrying
/// X_m is replaced by its derivative block, all other factors kept).
inline std::vector<ComplexMatrix> grad_buildUnitary(const RealVector& x, const StiefelChart& chart) {
  chart.require_length(x, "grad_buildUnitary");
  const int k = chart.k(), r = chart.r();
  const auto& fs = chart.factors();
  const std::size_t n = fs.size();

  // suffix[f] = (F_{f+1} ... F_{n-1}) R
  std::vector<ComplexMatrix> suffix(n);
  ComplexMatrix s = detail::phase_block(chart, x);
  for (std::size_t f = n; f-- > 0;) {
    suffix[f] = s;
    detail::apply_rows(detail::factor_at(chart, fs[f], x), s, fs[f].row);
  }

  std::vector<ComplexMatrix> out(static_cast<std::size_t>(chart.dim()), ComplexMatrix::Zero(k, r));
  ComplexMatrix prefix = ComplexMatrix::Identity(k, k);
  for (std::size_t f = 0; f < n; ++f) {
    const int row = fs[f].row;
    const double th = x(chart.theta_index(fs[f])), ph = x(chart.phi_index(fs[f]));
    for (int which = 0; which < 2; ++which) {
      const auto d = which == 0 ? detail::chart_factor_dtheta(th, ph) : detail::chart_factor_dphi(th, ph);
      const auto top = suffix[f].row(row), bottom = suffix[f].row(row + 1);
      const Eigen::RowVectorXcd d0 = d.a00 * top + d.a01 * bottom;
      const Eigen::RowVectorXcd d1 = d.a10 * top + d.a11 * bottom;
      auto& target = out[static_cast<std::size_t>(which == 0 ? chart.theta_index(fs[f]) : chart.phi_index(fs[f]))];
      target = prefix.col(row) * d0 + prefix.col(row + 1) * d1;
    }
    detail::apply_cols(detail::factor_at(chart, fs[f], x), prefix, row);
  }
  // dU/dchi_m = i U e_m e_m^T
  const ComplexMatrix u = buildUnitary(x, chart);
  for (int m = 0; m < r; ++m) out[static_cast<std::size_t>(chart.chi_index(m))].col(m) = Complex(0.0, 1.0) * u.col(m);
  return out;
}

inline std::vector<ComplexMatrix> grad_buildUnitary(const RealVector& x, int k, int r) {
  return grad_buildUnitary(x, StiefelChart(k, r));
}

/// Angles X with buildUnitary(X) = U, found by zeroing U's subdiagonal with
/// the inverse chart factors in product order. The chart is not injective;
/// only the round trip is guaranteed.
inline RealVector decomposeUnitary(const ComplexMatrix& u) {
  const int k = static_cast<int>(u.rows()), r = static_cast<int>(u.cols());
  if (r < 1 || k < r) throw std::invalid_argument("decomposeUnitary: need k >= r >= 1");
  if (orthonormality_defect(u) > 1e-8) throw std::invalid_argument("decomposeUnitary: columns are not orthonormal");
  const StiefelChart chart(k, r);
  RealVector x = RealVector::Zero(chart.dim());
  ComplexMatrix w = u;
  std::size_t f = 0;
  const auto& fs = chart.factors();
  for (int col = 0; col < r; ++col) {
    for (int j = 1; j <= k - col - 1; ++j, ++f) {
      const int s = fs[f].row;
      const Complex a = w(s, col), b = w(s + 1, col);
      double theta = 0.0, phi = 0.0;
      if (b != Complex(0.0)) {
        theta = std::atan2(std::abs(b), std::abs(a));
        phi = 0.5 * (std::arg(b) - (a == Complex(0.0) ? 0.0 : std::arg(a)));
      }
      x(chart.theta_index(fs[f])) = theta;
      x(chart.phi_index(fs[f])) = phi;
      detail::apply_rows(detail::adjoint(detail::chart_factor(theta, phi)), w, s);
      w(s + 1, col) = 0.0;
    }
    x(chart.chi_index(col)) = std::arg(w(col, col));
  }
  return x;
}

/// Chain rule dh/dX_m = sum Re(conj(G) * dU/dX_m) for a matrix gradient G of
/// h at U(X), evaluated in one reverse sweep over the chart factors.
inline RealVector grad_eh_adapt(const RealVector& x, const StiefelChart& chart,
                                const std::function<ComplexMatrix(const ComplexMatrix&)>& matrix_gradient) {
  chart.require_length(x, "grad_eh_adapt");
  const ComplexMatrix u = buildUnitary(x, chart);
  const ComplexMatrix g_full = matrix_gradient(u);
  if (g_full.rows() != chart.k() || g_full.cols() < chart.r())
    throw std::invalid_argument("grad_eh_adapt: matrix gradient has wrong dimensions");
  const ComplexMatrix g = g_full.leftCols(chart.r());
  const auto& fs = chart.factors();

  RealVector out(chart.dim());
  for (int m = 0; m < chart.r(); ++m) out(chart.chi_index(m)) = real_inner(Complex(0.0, 1.0) * u.col(m), g.col(m));

  // adj = M^dag G with M the full factor product; then walk factors backwards
  // keeping adj = P_f^dag G (P_f = factors before f) and s = suffix after f.
  ComplexMatrix adj = g;
  for (const auto& f : fs) detail::apply_rows(detail::adjoint(detail::factor_at(chart, f, x)), adj, f.row);
  ComplexMatrix s = detail::phase_block(chart, x);
  for (auto it = fs.rbegin(); it != fs.rend(); ++it) {
    const auto fac = detail::factor_at(chart, *it, x);
    const int row = it->row;
    detail::apply_rows(fac, adj, row);
    const double th = x(chart.theta_index(*it)), ph = x(chart.phi_index(*it));
    for (int which = 0; which < 2; ++which) {
      const auto d = which == 0 ? detail::chart_factor_dtheta(th, ph) : detail::chart_factor_dphi(th, ph);
      double acc = 0.0;
      for (Eigen::Index c = 0; c < s.cols(); ++c) {
        const Complex d0 = d.a00 * s(row, c) + d.a01 * s(row + 1, c);
        const Complex d1 = d.a10 * s(row, c) + d.a11 * s(row + 1, c);
        acc += (std::conj(adj(row, c)) * d0 + std::conj(adj(row + 1, c)) * d1).real();
      }
      out(which == 0 ? chart.theta_index(*it) : chart.phi_index(*it)) = acc;
    }
    detail::apply_rows(fac, s, row);
  }
  return out;
}

inline RealVector grad_eh_adapt(const RealVector& x, int k, int r,
                                const std::function<ComplexMatrix(const ComplexMatrix&)>& matrix_gradient) {
  return grad_eh_adapt(x, StiefelChart(k, r), matrix_gradient);
}

using AngleObjective = ObjectivePair<RealVector, RealVector>;

/// h(U(X)) and its angle gradient for rho truncated to its r leading
/// eigenpairs, decompositions of cardinality k.
inline AngleObjective createEHFunctions(SpectralData spectral, int k, MeasureHandle measure) {
  auto spectrum = std::make_shared<const SpectralData>(std::move(spectral));
  auto chart = std::make_shared<const StiefelChart>(k, spectrum->rank());
  auto m = std::make_shared<const MeasureHandle>(std::move(measure));
  return {[spectrum, chart, m](const RealVector& x) { return convexSum(buildUnitary(x, *chart), *m, *spectrum); },
          [spectrum, chart, m](const RealVector& x) {
            return grad_eh_adapt(x, *chart, [&](const ComplexMatrix& u) { return grad_convexSum(u, *m, *spectrum); });
          }};
}

inline AngleObjective createEHFunctions(const ComplexMatrix& rho, int k, int r, MeasureHandle measure,
                                        DensityEigOptions eig_opts = {}) {
  eig_opts.max_rank = eig_opts.max_rank ? std::min(*eig_opts.max_rank, r) : r;
  auto spectrum = densityEig(rho, eig_opts);
  if (spectrum.rank() != r) throw std::invalid_argument("createEHFunctions: r exceeds the rank of rho");
  return createEHFunctions(std::move(spectrum), k, std::move(measure));
}

}  // namespace croof
