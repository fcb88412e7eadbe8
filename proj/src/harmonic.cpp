// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include "harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace transferlab {

namespace {

constexpr std::uint64_t kDirect = 4096;

double direct(std::uint64_t a, std::uint64_t b) {
  double s = 0.0;
  for (std::uint64_t k = b; k >= a; --k) {
    s += 1.0 / static_cast<double>(k);
    if (k == a) break;
  }
  return s;
}

// H_b - H_m for m >= kDirect, b > m.
double asymptotic_difference(std::uint64_t m, std::uint64_t b) {
  const double fm = static_cast<double>(m);
  const double fb = static_cast<double>(b);
  const double lead = std::log1p(static_cast<double>(b - m) / fm);
  const double c1 = 0.5 / fb - 0.5 / fm;
  const double c2 = -(1.0 / (12.0 * fb * fb) - 1.0 / (12.0 * fm * fm));
  const double c4 = 1.0 / (120.0 * fb * fb * fb * fb) - 1.0 / (120.0 * fm * fm * fm * fm);
  return lead + c1 + c2 + c4;
}

}  // namespace

double harmonic_range(std::uint64_t a, std::uint64_t b) {
  if (a == 0) a = 1;
  if (b < a) return 0.0;
  if (b - a < kDirect) return direct(a, b);
  if (a <= kDirect) return direct(a, kDirect) + asymptotic_difference(kDirect, b);
  return asymptotic_difference(a - 1, b);
}

double harmonic(std::uint64_t n) { return harmonic_range(1, n); }

std::uint64_t harmonic_inverse(double target, std::uint64_t cap) {
  static const std::vector<double> table = [] {
    std::vector<double> h(kDirect + 1, 0.0);
    for (std::uint64_t k = 1; k <= kDirect; ++k) h[k] = harmonic(k);
    return h;
  }();
  if (cap == 0) return 0;
  if (!(target > 0.0)) return 1;
  if (target <= table.back()) {
    const auto it = std::lower_bound(table.begin() + 1, table.end(), target);
    return std::min<std::uint64_t>(static_cast<std::uint64_t>(it - table.begin()), cap);
  }
  constexpr double kEulerGamma = 0.57721566490153286061;
  const double x = std::exp(target - kEulerGamma) - 0.5;
  if (!(x < 0x1.0p63) || x >= static_cast<double>(cap)) return cap;
  auto k = std::max<std::uint64_t>(kDirect + 1, static_cast<std::uint64_t>(std::ceil(x)));
  k = std::min(k, cap);
  if (k <= (std::uint64_t{1} << 40)) {
    while (k < cap && harmonic(k) < target) ++k;
    while (k > kDirect + 1 && harmonic(k - 1) >= target) --k;
  }
  return k;
}

}  // namespace transferlab
