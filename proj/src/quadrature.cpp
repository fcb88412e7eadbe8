// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include "quadrature.hpp"

#include <sstream>
#include <vector>

#include "errors.hpp"

namespace transferlab {

namespace {

void check(const QuadratureResult& r, double tol) {
  if (!r.converged) {
    std::ostringstream os;
    os << "adaptive Simpson did not converge: unresolved error "
       << r.unresolved_error << " exceeds tolerance " << tol;
    throw QuadratureError(os.str(), r.unresolved_error);
  }
}

double box_level(const std::function<double(std::span<const double>)>& f,
                 std::span<const double> lo, std::span<const double> hi,
                 std::vector<double>& point, std::size_t level, double tol,
                 int max_depth) {
  const std::size_t dim = lo.size();
  if (level + 1 == dim) {
    auto inner = [&](double x) {
      point[level] = x;
      return f(point);
    };
    auto r = adaptive_simpson(inner, lo[level], hi[level], tol, max_depth);
    check(r, tol);
    return r.value;
  }
  const double width = hi[level] - lo[level];
  const double inner_tol = tol / (20.0 * (width > 1.0 ? width : 1.0));
  auto outer = [&](double x) {
    point[level] = x;
    return box_level(f, lo, hi, point, level + 1, inner_tol, max_depth);
  };
  auto r = adaptive_simpson(outer, lo[level], hi[level], tol, max_depth);
  check(r, tol);
  return r.value;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
  auto r = adaptive_simpson(f, a, b, tol, max_depth);
  check(r, tol);
  return r.value;
}

double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lo, std::span<const double> hi,
                     double tol, int max_depth) {
  if (lo.empty() || lo.size() != hi.size()) {
    throw Error(ErrorCode::invalid_argument, "integrate_box: bad box");
  }
  std::vector<double> point(lo.size(), 0.0);
  return box_level(f, lo, hi, point, 0, tol, max_depth);
}

}  // namespace transferlab
