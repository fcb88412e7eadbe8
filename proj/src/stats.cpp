// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace transferlab {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

// Distinct values of a sorted range.
std::vector<double> distinct(std::span<const double> sorted) {
  std::vector<double> out;
  out.reserve(sorted.size());
  for (double v : sorted) {
    if (out.empty() || out.back() != v) out.push_back(v);
  }
  return out;
}

double count_le(std::span<const double> sorted, double x) {
  return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
}

double count_lt(std::span<const double> sorted, double x) {
  return static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
}

}  // namespace

double ks_coefficient(double alpha) {
  require_alpha(alpha);
  if (alpha == 0.01) return 1.628;
  if (alpha == 0.05) return 1.358;
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

double ks_distance(const EmpiricalDistribution& emp, const Distribution& target,
                   std::vector<EcdfRow>* table) {
  if (emp.empty()) throw DomainError("ks_one_sample: empty sample");
  const auto values = emp.values();
  const double n = static_cast<double>(values.size());
  double best = 0.0;
  std::size_t i = 0;
  while (i < values.size()) {
    const double x = values[i];
    std::size_t j = i;
    while (j < values.size() && values[j] == x) ++j;
    const double f_left = target.cdf_left(x);
    const double f = target.cdf(x);
    const double e_left = static_cast<double>(i) / n;
    const double e = static_cast<double>(j) / n;
    best = std::max({best, std::abs(e - f), std::abs(e_left - f_left)});
    if (table != nullptr) table->push_back({x, e, f, std::abs(e - f)});
    i = j;
  }
  return best;
}

GofReport ks_one_sample(const EmpiricalDistribution& emp, const Distribution& target,
                        double alpha, std::vector<EcdfRow>* table) {
  GofReport r;
  r.statistic = "ks_one_sample";
  r.value = ks_distance(emp, target, table);
  r.n = emp.size();
  r.alpha = alpha;
  r.critical = ks_coefficient(alpha) / std::sqrt(static_cast<double>(r.n));
  r.pass = r.value < r.critical;
  return r;
}

double ks_lattice_distance(std::span<const double> values, std::span<const double> half_widths,
                           const Distribution& target, std::vector<EcdfRow>* table) {
  if (values.empty()) throw DomainError("ks_one_sample_lattice: empty sample");
  if (values.size() != half_widths.size()) {
    throw DomainError("ks_one_sample_lattice: one half-width per sample value");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  double max_h = 0.0;
  for (double h : half_widths) {
    if (!(h >= 0.0) || !std::isfinite(h)) throw DomainError("half-widths must be finite, >= 0");
    max_h = std::max(max_h, h);
  }
  const double lo = sorted.front() - max_h - 1.0;
  const double hi = sorted.back() + max_h + 1.0;
  const auto atoms = target.atoms(lo, hi);

  // Exclusion radius per atom: a quarter of the spacing to its neighbours.
  std::vector<double> radius(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    double gap = std::numeric_limits<double>::infinity();
    if (k > 0) gap = std::min(gap, atoms[k] - atoms[k - 1]);
    if (k + 1 < atoms.size()) gap = std::min(gap, atoms[k + 1] - atoms[k]);
    radius[k] = std::isfinite(gap) ? 0.25 * gap : 1e-9 * std::max(1.0, std::abs(atoms[k]));
  }
  auto excluded = [&](double y) {
    auto it = std::lower_bound(atoms.begin(), atoms.end(), y);
    if (it != atoms.end()) {
      const auto k = static_cast<std::size_t>(it - atoms.begin());
      if (*it - y < radius[k]) return true;
    }
    if (it != atoms.begin()) {
      const auto k = static_cast<std::size_t>(it - atoms.begin()) - 1;
      if (y - atoms[k] < radius[k]) return true;
    }
    return false;
  };

  std::vector<double> points;
  points.reserve(2 * values.size() + 2 * atoms.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double h = half_widths[i];
    if (h == 0.0) {
      points.push_back(values[i]);
    } else {
      points.push_back(values[i] - h);
      points.push_back(values[i] + h);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::erase_if(points, excluded);
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    points.push_back(atoms[k] - radius[k]);
    points.push_back(atoms[k] + radius[k]);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  double best = 0.0;
  for (double y : points) {
    const double e = count_le(sorted, y) / n;
    const double e_left = count_lt(sorted, y) / n;
    const double f = target.cdf(y);
    const double f_left = target.cdf_left(y);
    best = std::max({best, std::abs(e - f), std::abs(e_left - f_left)});
    if (table != nullptr) table->push_back({y, e, f, std::abs(e - f)});
  }
  return best;
}

GofReport ks_one_sample_lattice(std::span<const double> values,
                                std::span<const double> half_widths,
                                const Distribution& target, double alpha,
                                std::vector<EcdfRow>* table) {
  GofReport r;
  r.statistic = "ks_one_sample_lattice";
  r.value = ks_lattice_distance(values, half_widths, target, table);
  r.n = values.size();
  r.alpha = alpha;
  r.critical = ks_coefficient(alpha) / std::sqrt(static_cast<double>(r.n));
  r.pass = r.value < r.critical;
  return r;
}

double ks_two_sample_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                              std::vector<EcdfRow>* table) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  const auto va = a.values();
  const auto vb = b.values();
  const double na = static_cast<double>(va.size());
  const double nb = static_cast<double>(vb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < va.size() || j < vb.size()) {
    double x;
    if (j >= vb.size() || (i < va.size() && va[i] <= vb[j])) {
      x = va[i];
    } else {
      x = vb[j];
    }
    while (i < va.size() && va[i] == x) ++i;
    while (j < vb.size() && vb[j] == x) ++j;
    const double fa = static_cast<double>(i) / na;
    const double fb = static_cast<double>(j) / nb;
    best = std::max(best, std::abs(fa - fb));
    if (table != nullptr) table->push_back({x, fa, fb, std::abs(fa - fb)});
  }
  return best;
}

GofReport ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                        double alpha, std::vector<EcdfRow>* table) {
  GofReport r;
  r.statistic = "ks_two_sample";
  r.value = ks_two_sample_distance(a, b, table);
  r.n = a.size();
  r.m = b.size();
  r.alpha = alpha;
  const double n = static_cast<double>(r.n);
  const double m = static_cast<double>(r.m);
  r.critical = ks_coefficient(alpha) * std::sqrt((n + m) / (n * m));
  r.pass = r.value < r.critical;
  return r;
}

double wasserstein1(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.empty() || b.empty()) throw DomainError("wasserstein1: empty sample");
  const auto va = a.values();
  const auto vb = b.values();
  std::vector<double> grid(va.begin(), va.end());
  grid.insert(grid.end(), vb.begin(), vb.end());
  std::sort(grid.begin(), grid.end());
  grid = distinct(grid);
  const double na = static_cast<double>(va.size());
  const double nb = static_cast<double>(vb.size());
  double total = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    while (i < va.size() && va[i] <= grid[k]) ++i;
    while (j < vb.size() && vb[j] <= grid[k]) ++j;
    const double diff = std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb);
    total += diff * (grid[k + 1] - grid[k]);
  }
  return total;
}

}  // namespace transferlab
