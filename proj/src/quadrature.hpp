// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <span>

namespace transferlab {

struct QuadratureResult {
  double value = 0.0;
  // Sum of the error estimates of intervals that hit the depth limit.
  double unresolved_error = 0.0;
  bool converged = true;
};

namespace detail {

template <class F>
double simpson_step(F& f, double a, double fa, double m, double fm, double b,
                    double fb, double whole, double tol, int depth,
                    QuadratureResult& acc) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) {
    acc.unresolved_error += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1, acc) +
         simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1, acc);
}

}  // namespace detail

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`. Intervals that
/// reach `max_depth` are accepted and their error estimates accumulated; the
/// result is flagged unconverged when that accumulated error exceeds `tol`.
template <class F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, double tol = 1e-8,
                                  int max_depth = 40) {
  QuadratureResult acc;
  if (!(b > a)) return acc;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  acc.value = detail::simpson_step(f, a, fa, m, fm, b, fb, whole, tol,
                                   max_depth, acc);
  acc.converged = acc.unresolved_error <= tol;
  return acc;
}

/// Like adaptive_simpson but throws QuadratureError when unconverged.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-8, int max_depth = 40);

/// Iterated adaptive Simpson over the box [lo, hi] (any dimension). The inner
/// tolerance is tightened by the outer interval length so inner noise stays
/// below what the outer refinement can resolve.
double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lo, std::span<const double> hi,
                     double tol = 1e-8, int max_depth = 40);

}  // namespace transferlab
