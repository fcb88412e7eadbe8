// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "experiments/na_field.hpp"
#include "experiments/random_sum.hpp"
#include "stats.hpp"

using namespace transferlab;

namespace {

ReplicationPlan plan_of(std::size_t replicates, std::uint64_t seed) {
  ReplicationPlan plan;
  plan.replicates = replicates;
  plan.seed = {seed, 0};
  return plan;
}

// Var(sum_{k <= N} X_k) from the coefficient of every eps_j, with
// X_k = eps_k - a eps_{k + e_1}, on an N_1 x N_2 box (N_2 = 1 for d = 1).
double brute_variance(double a, std::uint64_t n1, std::uint64_t n2) {
  std::vector<double> coef((n1 + 1) * n2, 0.0);
  for (std::uint64_t j = 0; j < n2; ++j) {
    for (std::uint64_t i = 0; i < n1; ++i) {
      coef[j * (n1 + 1) + i] += 1.0;
      coef[j * (n1 + 1) + i + 1] -= a;
    }
  }
  double v = 0.0;
  for (double c : coef) v += c * c;
  return v;
}

}  // namespace

TEST_CASE("random index discretization") {
  RandomSumConfig cfg;
  cfg.stage = 4;  // k_n = 16
  const std::vector<double> t{0.3};
  CHECK(random_sum_index(cfg, t) == MultiIndex({4}));
  const std::vector<double> tiny{0.01};
  CHECK(random_sum_index(cfg, tiny) == MultiIndex({1}));
  cfg.k_seq.assign(2, SamplingSequence::power_of_two());
  cfg.mixing = MixingLaw::point({1.0, 1.0});
  const std::vector<double> t2{0.5, 2.0};
  CHECK(random_sum_index(cfg, t2) == MultiIndex({8, 32}));
}

TEST_CASE("random sum with degenerate mixing is the CLT") {
  RandomSumConfig cfg;
  cfg.mixing = MixingLaw::point({1.0});
  const auto r = run_random_sum(cfg, plan_of(10000, 1));
  const auto g = ks_one_sample(r.empirical, Normal(0.0, 1.0), 0.01);
  CHECK(g.value < 0.02);
  CHECK(g.pass);
}

TEST_CASE("random sum in two dimensions") {
  RandomSumConfig cfg;
  cfg.k_seq.assign(2, SamplingSequence::power_of_two());
  cfg.stage = 7;
  cfg.mixing = MixingLaw::point({1.0, 1.0});
  const auto r = run_random_sum(cfg, plan_of(10000, 2));
  CHECK(ks_distance(r.empirical, Normal(0.0, 1.0)) < 0.02);
}

TEST_CASE("finite-n random sum is exactly N(0, floor(k_n t) / k_n)") {
  RandomSumConfig cfg;
  cfg.stage = 4;
  cfg.mixing = MixingLaw::point({0.3});
  const auto r = run_random_sum(cfg, plan_of(10000, 3));
  CHECK(ks_one_sample(r.empirical, Normal(0.0, 0.25), 0.01).pass);
  CHECK_FALSE(ks_one_sample(r.empirical, Normal(0.0, 0.4), 0.01).pass);
}

TEST_CASE("random sum against a uniform mixture") {
  RandomSumConfig cfg;
  cfg.stage = 10;
  cfg.mixing = MixingLaw::uniform_box({0.0}, {2.0});
  const auto r = run_random_sum(cfg, plan_of(5000, 4));
  CHECK(ks_one_sample(r.empirical, *r.target, 0.01).pass);
}

TEST_CASE("random sum validation") {
  RandomSumConfig cfg;
  cfg.mixing = MixingLaw::point({1.0, 1.0});
  CHECK_THROWS_AS(run_random_sum(cfg, plan_of(10, 1)), ConfigError);
  cfg.mixing = MixingLaw::uniform_box({-1.0}, {1.0});
  CHECK_THROWS_AS(run_random_sum(cfg, plan_of(10, 1)), ConfigError);
  cfg.mixing = MixingLaw::point({1.0});
  cfg.stage = 40;
  CHECK_THROWS_AS(run_random_sum(cfg, plan_of(10, 1)), ConfigError);
}

TEST_CASE("NA partial-sum variance against the coefficient oracle") {
  for (double a : {0.1, 0.5, 0.9}) {
    for (std::uint64_t n1 : {1ULL, 2ULL, 7ULL, 100ULL}) {
      const std::vector<std::uint64_t> N1{n1};
      CHECK(na_partial_sum_variance(a, N1) ==
            doctest::Approx(brute_variance(a, n1, 1)).epsilon(1e-12));
      for (std::uint64_t n2 : {1ULL, 3ULL, 20ULL}) {
        const std::vector<std::uint64_t> N2{n1, n2};
        CHECK(na_partial_sum_variance(a, N2) ==
              doctest::Approx(brute_variance(a, n1, n2)).epsilon(1e-12));
      }
    }
  }
  // Per-site variance tends to sigma^2 = (1 - a)^2.
  const std::vector<std::uint64_t> big{1000000};
  CHECK(na_partial_sum_variance(0.5, big) / 1e6 == doctest::Approx(0.25).epsilon(1e-5));
}

TEST_CASE("NA field covariance structure") {
  Rng rng(5, 0);
  const auto c1 = na_field_covariance(0.5, 1, 1000000, rng);
  CHECK(std::abs(c1.lag1 + 0.5) < 0.02);
  CHECK(std::abs(c1.lag2) < 0.02);
  CHECK(std::abs(c1.variance - 1.25) < 0.02);
  CHECK_FALSE(c1.cross.has_value());
  const auto c2 = na_field_covariance(0.3, 2, 1000000, rng);
  CHECK(std::abs(c2.lag1 + 0.3) < 0.02);
  REQUIRE(c2.cross.has_value());
  CHECK(std::abs(*c2.cross) < 0.02);
}

TEST_CASE("NA field transfer") {
  SUBCASE("d = 1, point mixing") {
    NAFieldConfig cfg;
    const auto r = run_na_field(cfg, plan_of(10000, 6));
    CHECK(r.sigma2 == 0.25);
    REQUIRE(r.finite_n.has_value());
    CHECK(r.finite_n->variance() == doctest::Approx((1.25 + 0.25 * 9999) / 10000.0));
    CHECK(ks_distance(r.transfer.empirical, Normal(0.0, 0.25)) < 0.02);
  }
  SUBCASE("d = 2, point mixing") {
    NAFieldConfig cfg;
    cfg.n = {200, 200};
    cfg.mixing = MixingLaw::point({1.0, 1.0});
    const auto r = run_na_field(cfg, plan_of(3000, 7));
    CHECK(ks_distance(r.transfer.empirical, Normal(0.0, 0.25)) < 0.03);
  }
  SUBCASE("d = 1, uniform mixing") {
    NAFieldConfig cfg;
    cfg.mixing = MixingLaw::uniform_box({0.0}, {2.0});
    const auto r = run_na_field(cfg, plan_of(5000, 8));
    CHECK(ks_one_sample(r.transfer.empirical, *r.transfer.target, 0.01).pass);
    CHECK_FALSE(r.finite_n.has_value());
  }
}

TEST_CASE("NA field validation") {
  NAFieldConfig cfg;
  cfg.a = 1.0;
  CHECK_THROWS_AS(run_na_field(cfg, plan_of(10, 1)), ConfigError);
  cfg.a = 0.5;
  cfg.max_sites = 1000;
  CHECK_THROWS_AS(run_na_field(cfg, plan_of(10, 1)), ConfigError);
  cfg.max_sites = std::uint64_t{1} << 25;
  cfg.mixing = MixingLaw::point({1.0, 1.0});
  CHECK_THROWS_AS(run_na_field(cfg, plan_of(10, 1)), ConfigError);
}
