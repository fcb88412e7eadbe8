// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations for the tests. Nothing here calls the
// library.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// P(P <= k) for P ~ Poisson(lambda), by summing the pmf recursively.
inline double poisson_cdf(double lambda, long k) {
  if (k < 0) return 0.0;
  double term = std::exp(-lambda);
  double sum = term;
  for (long j = 1; j <= k; ++j) {
    term *= lambda / static_cast<double>(j);
    sum += term;
  }
  return sum;
}

/// n-point Gauss-Legendre rule on [a, b]; nodes by Newton iteration.
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                             int n = 40) {
  double sum = 0.0;
  for (int i = 1; i <= n; ++i) {
    double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    sum += w * f(0.5 * (b - a) * x + 0.5 * (b + a));
  }
  return 0.5 * (b - a) * sum;
}

/// Exact moments of the number of boxes with exactly r balls, by listing all
/// N^n allocations. Returns {mean, variance} from integer sums.
struct Moments {
  double mean;
  double variance;
};

inline Moments enumerate_occupancy(unsigned r, unsigned n, unsigned N) {
  std::uint64_t outcomes = 1;
  for (unsigned i = 0; i < n; ++i) outcomes *= N;
  std::vector<unsigned> box(n, 0);
  std::vector<unsigned> count(N);
  std::int64_t s1 = 0, s2 = 0;
  for (std::uint64_t o = 0; o < outcomes; ++o) {
    std::uint64_t code = o;
    std::fill(count.begin(), count.end(), 0u);
    for (unsigned i = 0; i < n; ++i) {
      ++count[code % N];
      code /= N;
    }
    std::int64_t mu = 0;
    for (unsigned c : count) mu += c == r ? 1 : 0;
    s1 += mu;
    s2 += mu * mu;
  }
  const auto M = static_cast<std::int64_t>(outcomes);
  const double mean = static_cast<double>(s1) / static_cast<double>(M);
  const double var = static_cast<double>(s2 * M - s1 * s1) / static_cast<double>(M * M);
  return {mean, var};
}

}  // namespace oracle
