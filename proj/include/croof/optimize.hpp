#pragma once

// Minimizers for convex-sum objectives:
//   cg_min   - conjugate gradient along geodesics U exp(tX) of the unitary group
//   bfgs_min - inverse-BFGS quasi-Newton over the Stiefel angle chart

#include "croof/convex_roof.hpp"
#include "croof/line_search.hpp"
#include "croof/linalg.hpp"
#include "croof/random.hpp"
#include "croof/stiefel.hpp"
#include "croof/types.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace croof {

struct TerminationOptions {
  int MaxIter = 1000;
  double TolFun = 1e-12;
  double TolG = 1e-10;
  double TolX = 1e-10;

  void validate() const {
    if (MaxIter < 1) throw std::invalid_argument("MaxIter must be at least 1");
    if (!(TolFun > 0.0 && TolG > 0.0 && TolX > 0.0)) throw std::invalid_argument("tolerances must be positive");
  }
};

enum class TerminationStatus { max_iter, tol_fun, tol_g, tol_x };

inline std::string_view to_string(TerminationStatus s) {
  switch (s) {
    case TerminationStatus::max_iter: return "max-iter";
    case TerminationStatus::tol_fun: return "tol-fun";
    case TerminationStatus::tol_g: return "tol-g";
    case TerminationStatus::tol_x: return "tol-x";
  }
  return "unknown";
}

/// Progress of one outer iteration as seen by the termination test.
struct IterationProgress {
  int iteration = 0;
  double value = 0.0;
  double previous_value = 0.0;
  double gradient_norm = 0.0;
  double step_norm = 0.0;
};

/// Criteria in priority order MaxIter, TolFun, TolG, TolX; first hit wins.
inline std::optional<TerminationStatus> check_termination(const IterationProgress& p, const TerminationOptions& opts) {
  if (p.iteration >= opts.MaxIter) return TerminationStatus::max_iter;
  if (std::abs(p.value - p.previous_value) < opts.TolFun) return TerminationStatus::tol_fun;
  if (p.gradient_norm < opts.TolG) return TerminationStatus::tol_g;
  if (p.step_norm < opts.TolX) return TerminationStatus::tol_x;
  return std::nullopt;
}

template <class Point>
struct OptimizationResult {
  double value = 0.0;
  Point point;
  TerminationStatus status = TerminationStatus::max_iter;
  int iterations = 0;
  std::vector<double> fvals;  // objective at every accepted outer iterate, starting point included
  std::vector<Point> xvals;   // matching iterates (empty unless recorded)
};

struct CgOptions {
  TerminationOptions termination;
  LineSearchOptions line_search{.c1 = 1e-4, .c2 = 0.4, .max_evaluations = 25, .initial_step = 1.0};
  double reorthonormalize_above = 1e-8;
  bool record_points = true;
};

struct BfgsOptions {
  TerminationOptions termination;
  LineSearchOptions line_search{.c1 = 1e-4, .c2 = 0.9, .max_evaluations = 25, .initial_step = 1.0};
  int reset_interval = 10;  // angles reduced mod 2pi every this many iterations
  bool record_points = true;
};

/// Riemannian gradient on U(k) in the Lie algebra:
///   G = (A - A^T)/2 + i (S + S^T)/2,
///   A = Re U^T grad_Re h + Im U^T grad_Im h,  S = Re U^T grad_Im h - Im U^T grad_Re h.
/// A + iS = U^dag grad h, so G is its anti-Hermitian part.
inline ComplexMatrix riemannian_gradient(const ComplexMatrix& u, const ComplexMatrix& euclidean_grad) {
  if (u.rows() != u.cols() || euclidean_grad.rows() != u.rows() || euclidean_grad.cols() != u.cols())
    throw std::invalid_argument("riemannian_gradient: dimension mismatch");
  const RealMatrix re_u = u.real(), im_u = u.imag();
  const RealMatrix gr = euclidean_grad.real(), gi = euclidean_grad.imag();
  const RealMatrix a = re_u.transpose() * gr + im_u.transpose() * gi;
  const RealMatrix s = re_u.transpose() * gi - im_u.transpose() * gr;
  ComplexMatrix g(u.rows(), u.cols());
  g.real() = 0.5 * (a - a.transpose());
  g.imag() = 0.5 * (s + s.transpose());
  return g;
}

template <class Point, class Gradient>
struct LineMinimum {
  double step = 0.0;
  Point point;
  double value = 0.0;
  Gradient gradient;
  LineSearchStatus status = LineSearchStatus::failed;
  int evaluations = 0;
};

/// Line minimization along the geodesic t -> U exp(tX), X anti-Hermitian.
/// phi'(t) = Re<U_t X, grad h(U_t)>.
inline LineMinimum<ComplexMatrix, ComplexMatrix> minimize1d_exp(const UnitaryObjective& obj, const ComplexMatrix& u,
                                                                double f0, const ComplexMatrix& grad0,
                                                                const AntiHermitianExp& geodesic,
                                                                const ComplexMatrix& direction,
                                                                const LineSearchOptions& opts) {
  LineMinimum<ComplexMatrix, ComplexMatrix> out{0.0, u, f0, grad0};
  ComplexMatrix last_point, last_grad;
  double last_t = std::numeric_limits<double>::quiet_NaN();
  auto phi = [&](double t) {
    last_t = t;
    last_point = u * geodesic(t);
    last_grad = obj.gradient(last_point);
    return std::pair{obj.value(last_point), real_inner(last_point * direction, last_grad)};
  };
  const double slope0 = real_inner(u * direction, grad0);
  const auto res = strong_wolfe_search(phi, f0, slope0, opts);
  out.status = res.status;
  out.evaluations = res.evaluations;
  if (res.accepted.step > 0.0) {
    out.step = res.accepted.step;
    out.value = res.accepted.value;
    if (res.accepted.step == last_t) {
      out.point = last_point;
      out.gradient = last_grad;
    } else {
      out.point = u * geodesic(out.step);
      out.gradient = obj.gradient(out.point);
    }
  }
  return out;
}

inline LineMinimum<ComplexMatrix, ComplexMatrix> minimize1d_exp(const UnitaryObjective& obj, const ComplexMatrix& u,
                                                                const ComplexMatrix& direction,
                                                                LineSearchOptions opts = {.c2 = 0.4}) {
  const double nrm = direction.norm();
  if (nrm > 0.0) opts.initial_step = 1.0 / nrm;
  return minimize1d_exp(obj, u, obj.value(u), obj.gradient(u), AntiHermitianExp(direction), direction, opts);
}

/// Line minimization along X + tS.
inline LineMinimum<RealVector, RealVector> minimize1d_lin(const AngleObjective& obj, const RealVector& x, double f0,
                                                          const RealVector& grad0, const RealVector& direction,
                                                          const LineSearchOptions& opts) {
  LineMinimum<RealVector, RealVector> out{0.0, x, f0, grad0};
  RealVector last_point, last_grad;
  double last_t = std::numeric_limits<double>::quiet_NaN();
  auto phi = [&](double t) {
    last_t = t;
    last_point = x + t * direction;
    last_grad = obj.gradient(last_point);
    return std::pair{obj.value(last_point), last_grad.dot(direction)};
  };
  const auto res = strong_wolfe_search(phi, f0, grad0.dot(direction), opts);
  out.status = res.status;
  out.evaluations = res.evaluations;
  if (res.accepted.step > 0.0) {
    out.step = res.accepted.step;
    out.value = res.accepted.value;
    if (res.accepted.step == last_t) {
      out.point = last_point;
      out.gradient = last_grad;
    } else {
      out.point = x + out.step * direction;
      out.gradient = obj.gradient(out.point);
    }
  }
  return out;
}

inline LineMinimum<RealVector, RealVector> minimize1d_lin(const AngleObjective& obj, const RealVector& x,
                                                          const RealVector& direction, const LineSearchOptions& opts = {}) {
  return minimize1d_lin(obj, x, obj.value(x), obj.gradient(x), direction, opts);
}

namespace detail {

inline void require_finite(double v, const char* who) {
  if (!std::isfinite(v)) throw std::runtime_error(std::string(who) + ": objective returned a non-finite value");
}

}  // namespace detail

/// Parallel transport of a tangent vector G along t -> U exp(tX) as seen from
/// the identity: exp(tX/2) G exp(-tX/2).
inline ComplexMatrix transport(const AntiHermitianExp& geodesic, const ComplexMatrix& g, double t) {
  const ComplexMatrix half = geodesic(0.5 * t);
  return half * g * half.adjoint();
}

/// max(0, <G_new - T, G_new> / <G_old, G_old>) with T the transported G_old.
inline double polak_ribiere(const ComplexMatrix& g_new, const ComplexMatrix& transported, const ComplexMatrix& g_old) {
  const double gg = real_inner(g_old, g_old);
  if (!(gg > 0.0)) return 0.0;
  return std::max(real_inner(g_new - transported, g_new) / gg, 0.0);
}

/// Geodesic conjugate gradient with the transported Polak-Ribiere parameter
///   gamma = <G_{i+1} - T, G_{i+1}> / <G_i, G_i>,  T = e^{tX/2} G_i e^{-tX/2},
/// clamped at 0, plus a steepest-descent restart every 5 k^2 iterations.
inline OptimizationResult<ComplexMatrix> cg_min(const UnitaryObjective& obj, const ComplexMatrix& u0,
                                                const CgOptions& opts = {}) {
  opts.termination.validate();
  if (u0.rows() != u0.cols()) throw std::invalid_argument("cg_min: initial point must be square");
  if (orthonormality_defect(u0) > 1e-8) throw std::invalid_argument("cg_min: initial point is not unitary");

  OptimizationResult<ComplexMatrix> res;
  ComplexMatrix u = u0;
  double f = obj.value(u);
  detail::require_finite(f, "cg_min");
  ComplexMatrix egrad = obj.gradient(u);
  ComplexMatrix g = riemannian_gradient(u, egrad);
  ComplexMatrix dir = -g;
  const long restart_every = 5L * u.rows() * u.rows();
  long since_restart = 0;

  res.fvals.push_back(f);
  if (opts.record_points) res.xvals.push_back(u);

  for (int iter = 1;; ++iter) {
    AntiHermitianExp geodesic(dir);
    LineSearchOptions ls = opts.line_search;
    ls.initial_step = 1.0 / std::max(dir.norm(), 1e-300);
    auto step = minimize1d_exp(obj, u, f, egrad, geodesic, dir, ls);
    if (step.step == 0.0 && since_restart > 0) {
      // conjugate direction failed, retry along -G
      dir = -g;
      since_restart = 0;
      geodesic = AntiHermitianExp(dir);
      ls.initial_step = 1.0 / std::max(dir.norm(), 1e-300);
      step = minimize1d_exp(obj, u, f, egrad, geodesic, dir, ls);
    }

    ComplexMatrix u_new = step.point;
    double f_new = step.value;
    ComplexMatrix egrad_new = step.gradient;
    if (orthonormality_defect(u_new) > opts.reorthonormalize_above) {
      u_new = completeGramSchmidt(u_new);
      f_new = obj.value(u_new);
      egrad_new = obj.gradient(u_new);
    }
    detail::require_finite(f_new, "cg_min");
    const ComplexMatrix g_new = riemannian_gradient(u_new, egrad_new);

    res.fvals.push_back(f_new);
    if (opts.record_points) res.xvals.push_back(u_new);
    const IterationProgress progress{iter, f_new, f, g_new.norm(), (u_new - u).norm()};

    const double gamma = polak_ribiere(g_new, transport(geodesic, g, step.step), g);

    u = u_new;
    f = f_new;
    egrad = egrad_new;
    g = g_new;
    res.iterations = iter;

    if (auto status = check_termination(progress, opts.termination)) {
      res.status = *status;
      break;
    }

    ++since_restart;
    dir = -g + gamma * dir;
    if (since_restart >= restart_every || real_inner(dir, g) >= 0.0) {
      dir = -g;
      since_restart = 0;
    }
  }
  res.value = f;
  res.point = u;
  return res;
}

/// Reduces every angle into (-pi, pi].
inline RealVector wrap_angles(const RealVector& x) {
  RealVector out = x;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    double a = std::remainder(out(i), 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    out(i) = a;
  }
  return out;
}

/// Inverse-BFGS update
///   H += (1 + g^T H g / d^T g) d d^T / d^T g - (d (H g)^T + (H g) d^T) / d^T g
/// skipped when the curvature d^T g is not safely positive.
inline bool bfgs_update(RealMatrix& h, const RealVector& delta, const RealVector& gamma) {
  const double dg = delta.dot(gamma);
  if (!(dg > 1e-12 * delta.norm() * gamma.norm())) return false;
  const RealVector hg = h * gamma;
  h += (1.0 + gamma.dot(hg) / dg) * (delta * delta.transpose()) / dg - (delta * hg.transpose() + hg * delta.transpose()) / dg;
  h = 0.5 * (h + h.transpose()).eval();
  return true;
}

inline OptimizationResult<RealVector> bfgs_min(const AngleObjective& obj, const RealVector& x0, const BfgsOptions& opts = {}) {
  opts.termination.validate();
  if (opts.reset_interval < 1) throw std::invalid_argument("bfgs_min: reset interval must be positive");
  const Eigen::Index n = x0.size();
  if (n < 1) throw std::invalid_argument("bfgs_min: empty starting point");

  OptimizationResult<RealVector> res;
  RealVector x = x0;
  double f = obj.value(x);
  detail::require_finite(f, "bfgs_min");
  RealVector g = obj.gradient(x);
  if (g.size() != n) throw std::invalid_argument("bfgs_min: gradient dimension mismatch");
  RealMatrix h = RealMatrix::Identity(n, n);
  RealVector dir = -g;
  bool identity_h = true;

  res.fvals.push_back(f);
  if (opts.record_points) res.xvals.push_back(x);

  for (int iter = 1;; ++iter) {
    auto step = minimize1d_lin(obj, x, f, g, dir, opts.line_search);
    // a stalled quasi-Newton step (often at a kink of the measure) falls back to -g
    if (!identity_h && step.step * dir.norm() <= opts.termination.TolX) {
      h.setIdentity();
      identity_h = true;
      dir = -g;
      step = minimize1d_lin(obj, x, f, g, dir, opts.line_search);
    }
    RealVector x_new = step.point;
    const double f_new = step.value;
    const RealVector g_new = step.gradient;
    detail::require_finite(f_new, "bfgs_min");

    const RealVector delta = x_new - x;
    const RealVector gamma = g_new - g;
    res.fvals.push_back(f_new);
    if (opts.record_points) res.xvals.push_back(x_new);
    const IterationProgress progress{iter, f_new, f, g_new.norm(), delta.norm()};

    if (bfgs_update(h, delta, gamma)) identity_h = false;
    if (iter % opts.reset_interval == 0) x_new = wrap_angles(x_new);

    x = x_new;
    f = f_new;
    g = g_new;
    res.iterations = iter;

    if (auto status = check_termination(progress, opts.termination)) {
      res.status = *status;
      break;
    }

    dir = -(h * g);
    if (!(dir.dot(g) < 0.0)) {
      h.setIdentity();
      identity_h = true;
      dir = -g;
    }
  }
  res.value = f;
  res.point = x;
  return res;
}

/// Runs `run(rng, index)` for each restart with an independent stream derived
/// from `seed` and keeps the lowest final value (earliest on ties).
template <class Point>
OptimizationResult<Point> best_of(int restarts, std::uint64_t seed,
                                  const std::function<OptimizationResult<Point>(Rng&, int)>& run) {
  if (restarts < 1) throw std::invalid_argument("best_of: need at least one restart");
  std::optional<OptimizationResult<Point>> best;
  for (int i = 0; i < restarts; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    auto r = run(rng, i);
    if (!best || r.value < best->value) best = std::move(r);
  }
  return std::move(*best);
}

}  // namespace croof
