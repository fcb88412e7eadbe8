// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "harmonic.hpp"
#include "oracles.hpp"
#include "quadrature.hpp"

using namespace transferlab;

TEST_CASE("adaptive Simpson meets its tolerance on smooth integrands") {
  CHECK(std::abs(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) - 2.0) <
        1e-8);
  CHECK(std::abs(integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0) -
                 std::sqrt(std::numbers::pi)) < 1e-8);
  const auto f = [](double t) { return oracle::phi(1.0 / std::sqrt(t)); };
  CHECK(std::abs(integrate(f, 1.0, 2.0) - oracle::gauss_legendre(f, 1.0, 2.0)) < 1e-8);
}

TEST_CASE("non-convergence reports the achieved tolerance") {
  // A jump of height 1 inside the interval cannot be resolved at depth 3.
  const auto step = [](double x) { return x < 0.3 ? 0.0 : 1.0; };
  const auto r = adaptive_simpson(step, 0.0, 1.0, 1e-12, 3);
  CHECK_FALSE(r.converged);
  try {
    integrate(step, 0.0, 1.0, 1e-12, 3);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.achieved_tolerance() > 1e-12);
  }
}

TEST_CASE("box integration") {
  const std::vector<double> lo{0.0, 1.0}, hi{2.0, 3.0};
  const double v = integrate_box([](std::span<const double> t) { return t[0] * t[1]; }, lo, hi);
  CHECK(v == doctest::Approx(2.0 * 4.0).epsilon(1e-9));
}

TEST_CASE("harmonic numbers") {
  CHECK(harmonic(0) == 0.0);
  CHECK(harmonic(1) == 1.0);
  CHECK(harmonic(3) == doctest::Approx(11.0 / 6.0).epsilon(1e-15));
  // Forward sums in long double as the oracle across the switch-over point.
  long double s = 0.0L;
  for (std::uint64_t k = 1; k <= 200000; ++k) {
    s += 1.0L / static_cast<long double>(k);
    if (k == 4095 || k == 4096 || k == 4097 || k == 10000 || k == 200000) {
      CHECK(harmonic(k) == doctest::Approx(static_cast<double>(s)).epsilon(1e-15));
    }
  }
  CHECK(harmonic_range(5000, 9000) ==
        doctest::Approx(harmonic(9000) - harmonic(4999)).epsilon(1e-12));
  CHECK(harmonic_range(7, 6) == 0.0);
  // H_n - log n -> Euler's gamma.
  CHECK(harmonic(1ULL << 40) - 40.0 * std::numbers::ln2 ==
        doctest::Approx(std::numbers::egamma).epsilon(1e-12));
}

TEST_CASE("harmonic inverse") {
  for (std::uint64_t k : {1ULL, 2ULL, 3ULL, 100ULL, 4096ULL, 4097ULL, 123456ULL, 1ULL << 30}) {
    CHECK(harmonic_inverse(harmonic(k), 1ULL << 50) == k);
    if (k > 1) {
      const double mid = 0.5 * (harmonic(k - 1) + harmonic(k));
      CHECK(harmonic_inverse(mid, 1ULL << 50) == k);
    }
  }
  CHECK(harmonic_inverse(harmonic(1000), 10) == 10);
}
