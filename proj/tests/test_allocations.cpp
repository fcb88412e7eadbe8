// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "experiments/allocations.hpp"
#include "oracles.hpp"
#include "stats.hpp"

using namespace transferlab;

TEST_CASE("exact moments match exhaustive enumeration") {
  for (unsigned N = 1; N <= 6; ++N) {
    for (unsigned n = 0; n <= 6; ++n) {
      for (unsigned r = 0; r <= n; ++r) {
        const auto m = oracle::enumerate_occupancy(r, n, N);
        INFO("r=" << r << " n=" << n << " N=" << N);
        CHECK(std::abs(alloc_exact_mean(r, n, N) - m.mean) <= 1e-12);
        CHECK(std::abs(alloc_exact_var(r, n, N) - m.variance) <= 1e-12);
      }
    }
  }
}

TEST_CASE("exact moment examples and domain") {
  CHECK(alloc_exact_mean(0, 2, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(alloc_exact_mean(1, 1, 1) == 1.0);
  CHECK(alloc_exact_var(1, 1, 1) == 0.0);
  CHECK_THROWS_AS(alloc_exact_mean(3, 2, 5), DomainError);
  CHECK_THROWS_AS(alloc_exact_var(0, 2, 0), DomainError);
  // Large arguments stay finite and positive.
  CHECK(alloc_exact_var(0, 10000, 10000) > 0.0);
  CHECK(alloc_exact_var(2, 1000000, 10000) > 0.0);
  // Central limit-scale: E mu_0(N, N) ~ N/e.
  CHECK(alloc_exact_mean(0, 100000, 100000) / 100000 ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-5));
}

TEST_CASE("simulated occupancy matches the exact moments") {
  Rng rng(1, 0);
  const int R = 20000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < R; ++i) {
    const double v = static_cast<double>(simulate_occupancy(1, 30, 20, rng));
    s += v;
    s2 += v * v;
  }
  const double mean = s / R;
  const double var = s2 / R - mean * mean;
  CHECK(std::abs(mean - alloc_exact_mean(1, 30, 20)) < 4 * std::sqrt(alloc_exact_var(1, 30, 20) / R));
  CHECK(var == doctest::Approx(alloc_exact_var(1, 30, 20)).epsilon(0.05));
}

TEST_CASE("canonical paths approach their regime points") {
  const std::uint64_t N = 10000;
  auto c = canonical_path(0, AllocationPath::central, N, 1.0);
  CHECK(c.balls == N);
  CHECK(classify_regime(0, c.limit).kind == LimitTag::Kind::normal);
  const auto phi = phi_alloc(0, c.balls, c.boxes);
  CHECK(phi.g == doctest::Approx(2.0 / N));
  CHECK(phi.d == doctest::Approx(std::exp(1.0) / N));

  auto s = canonical_path(0, AllocationPath::sparse, N, 1.0);
  CHECK(s.balls == 141);  // round(sqrt(2 N))
  CHECK(phi_alloc(0, s.balls, s.boxes).g == doctest::Approx(1.0).epsilon(0.01));
  CHECK(classify_regime(0, s.limit).lambda == doctest::Approx(1.0));

  for (unsigned r : {0u, 1u, 2u}) {
    const auto d = canonical_path(r, AllocationPath::dense, N, 3.0);
    CHECK(d.balls >= std::max(1u, r) * N);
    CHECK(alloc_exact_mean(r, d.balls, N) == doctest::Approx(3.0).epsilon(0.01));
    const auto p = phi_alloc(r, d.balls, d.boxes);
    CHECK(p.d == doctest::Approx(1.0 / 3.0).epsilon(0.05));
    CHECK(classify_regime(r, d.limit).lambda == doctest::Approx(3.0));
  }
  const auto s2 = canonical_path(2, AllocationPath::sparse, N, 1.0);
  CHECK(alloc_exact_mean(2, s2.balls, N) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(s2.balls < 2 * N);
  CHECK_THROWS_AS(canonical_path(1, AllocationPath::sparse, N, 1.0), ConfigError);
  CHECK_THROWS_AS(canonical_path(0, AllocationPath::central, 1, 1.0), ConfigError);
  CHECK_THROWS_AS(canonical_path(0, AllocationPath::dense, N, -1.0), ConfigError);
}

TEST_CASE("allocation runs") {
  ReplicationPlan plan;
  plan.replicates = 5000;
  plan.seed = {42, 0};
  SUBCASE("central r = 0") {
    AllocationConfig cfg;
    cfg.index_law.push_back({canonical_path(0, AllocationPath::central, 10000, 1.0), 1.0});
    const auto r = run_allocations(cfg, plan);
    CHECK(ks_one_sample_lattice(r.values, r.half_widths, *r.target, 0.01).pass);
    CHECK(std::abs(r.empirical.mean()) < 4.0 / std::sqrt(5000.0));
    CHECK(std::abs(r.empirical.variance() - 1.0) < 0.05);
  }
  SUBCASE("sparse r = 0 against the standardized Poisson law") {
    AllocationConfig cfg;
    cfg.index_law.push_back({canonical_path(0, AllocationPath::sparse, 10000, 1.0), 1.0});
    const auto r = run_allocations(cfg, plan);
    CHECK(r.target->describe().find("Poisson") != std::string::npos);
    CHECK(ks_one_sample_lattice(r.values, r.half_widths, *r.target, 0.01).pass);
    // A wrong regime is rejected.
    CHECK_FALSE(ks_one_sample_lattice(r.values, r.half_widths, Normal(0.0, 1.0), 0.01).pass);
  }
  SUBCASE("two-point index law") {
    AllocationConfig cfg;
    cfg.index_law.push_back({canonical_path(0, AllocationPath::central, 10000, 1.0), 0.5});
    cfg.index_law.push_back({canonical_path(0, AllocationPath::sparse, 10000, 1.0), 0.5});
    const auto r = run_allocations(cfg, plan);
    CHECK(ks_one_sample_lattice(r.values, r.half_widths, *r.target, 0.01).pass);
    const auto hand = 0.5 * std_poisson_cdf(1.0, 0.0) + 0.25;
    CHECK(r.target->cdf(0.0) == doctest::Approx(hand).epsilon(1e-14));
  }
  SUBCASE("zero variance names the index") {
    AllocationConfig cfg;
    AllocationIndex idx;
    idx.balls = 3;
    idx.boxes = 1;
    idx.limit = {0.0, 0.0, false};
    cfg.index_law.push_back({idx, 1.0});
    try {
      run_allocations(cfg, plan);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("(r=0, n=3, N=1)") != std::string::npos);
    }
  }
}
