#pragma once

// One-dimensional minimization enforcing the strong Wolfe conditions:
// bracketing followed by safeguarded cubic interpolation (zoom).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>

namespace croof {

enum class LineSearchStatus {
  wolfe,          // strong Wolfe conditions satisfied
  armijo,         // evaluation budget exhausted, sufficient decrease only
  non_descent,    // slope at t = 0 not negative, nothing done
  failed,         // no decrease found, step 0
};

struct LineSearchOptions {
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_evaluations = 25;
  double initial_step = 1.0;
};

struct LineSearchTrial {
  double step = 0.0;
  double value = 0.0;
  double slope = 0.0;
};

struct LineSearchOutcome {
  LineSearchTrial accepted;  // step 0 when nothing was accepted
  LineSearchStatus status = LineSearchStatus::failed;
  int evaluations = 0;
};

namespace detail {

// Minimizer of the cubic through (a, fa, da), (b, fb, db), kept at least 10%
// of the interval away from both ends; bisection when the cubic degenerates.
inline double cubic_step(const LineSearchTrial& a, const LineSearchTrial& b) {
  const double lo = std::min(a.step, b.step), hi = std::max(a.step, b.step);
  const double width = hi - lo;
  const double mid = 0.5 * (lo + hi);
  if (!(width > 0.0)) return mid;
  const double d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.step - b.step);
  const double disc = d1 * d1 - a.slope * b.slope;
  if (!(disc >= 0.0)) return mid;
  const double d2 = std::copysign(std::sqrt(disc), b.step - a.step);
  const double denom = b.slope - a.slope + 2.0 * d2;
  if (denom == 0.0) return mid;
  const double t = b.step - (b.step - a.step) * (b.slope + d2 - d1) / denom;
  if (!std::isfinite(t)) return mid;
  return std::clamp(t, lo + 0.1 * width, hi - 0.1 * width);
}

}  // namespace detail

/// Searches phi(t) for t > 0 given phi(0) and phi'(0). `phi` returns
/// (value, slope). Never returns a step whose value exceeds phi(0).
inline LineSearchOutcome strong_wolfe_search(const std::function<std::pair<double, double>(double)>& phi, double f0,
                                             double slope0, const LineSearchOptions& opts) {
  LineSearchOutcome out;
  out.accepted = {0.0, f0, slope0};
  if (!(slope0 < 0.0)) {
    out.status = LineSearchStatus::non_descent;
    return out;
  }

  std::optional<LineSearchTrial> best;  // lowest value below f0
  auto evaluate = [&](double t) {
    auto [f, d] = phi(t);
    ++out.evaluations;
    LineSearchTrial trial{t, f, d};
    if (std::isfinite(f) && f <= f0 && (!best || f < best->value)) best = trial;
    return trial;
  };
  auto armijo = [&](const LineSearchTrial& tr) { return std::isfinite(tr.value) && tr.value <= f0 + opts.c1 * tr.step * slope0; };
  auto curvature = [&](const LineSearchTrial& tr) { return std::abs(tr.slope) <= -opts.c2 * slope0; };
  auto accept = [&](const LineSearchTrial& tr, LineSearchStatus st) {
    out.accepted = tr;
    out.status = st;
    return out;
  };

  auto zoom = [&](LineSearchTrial lo, LineSearchTrial hi) -> std::optional<LineSearchTrial> {
    while (out.evaluations < opts.max_evaluations) {
      const double t = detail::cubic_step(lo, hi);
      if (t == lo.step || t == hi.step) break;
      const auto tr = evaluate(t);
      if (!armijo(tr) || tr.value >= lo.value) {
        hi = tr;
      } else {
        if (curvature(tr)) return tr;
        if (tr.slope * (hi.step - lo.step) >= 0.0) hi = lo;
        lo = tr;
      }
    }
    return std::nullopt;
  };

  LineSearchTrial prev{0.0, f0, slope0};
  double t = opts.initial_step;
  for (int i = 0; out.evaluations < opts.max_evaluations; ++i) {
    const auto tr = evaluate(t);
    std::optional<LineSearchTrial> found;
    if (!armijo(tr) || (i > 0 && tr.value >= prev.value)) {
      found = zoom(prev, tr);
    } else if (curvature(tr)) {
      return accept(tr, LineSearchStatus::wolfe);
    } else if (tr.slope >= 0.0) {
      found = zoom(tr, prev);
    } else {
      prev = tr;
      t *= 2.0;
      continue;
    }
    if (found) return accept(*found, LineSearchStatus::wolfe);
    break;
  }

  if (best && armijo(*best)) return accept(*best, LineSearchStatus::armijo);

  // Backtracking from the smallest step tried.
  double step = std::min(opts.initial_step, best ? best->step : opts.initial_step);
  for (int i = 0; i < 60; ++i) {
    step *= 0.5;
    const auto tr = evaluate(step);
    if (armijo(tr)) return accept(tr, LineSearchStatus::armijo);
  }
  if (best && best->value < f0) return accept(*best, LineSearchStatus::armijo);
  out.status = LineSearchStatus::failed;
  return out;
}

}  // namespace croof
