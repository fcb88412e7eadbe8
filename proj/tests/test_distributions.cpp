// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "distributions.hpp"
#include "errors.hpp"
#include "families.hpp"
#include "mc_engine.hpp"
#include "oracles.hpp"
#include "stats.hpp"

using namespace transferlab;

namespace {

EmpiricalDistribution draw(const Distribution& d, std::size_t n, std::uint64_t seed) {
  ReplicationPlan plan;
  plan.replicates = n;
  plan.seed = {seed, 0};
  return run_replicated(plan, [&](Rng& rng) { return d.sample(rng); });
}

void check_monotone(const Distribution& d, double lo, double hi) {
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = lo + (hi - lo) * i / 1000.0;
    const double f = d.cdf(x);
    CHECK(f >= prev);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(d.cdf_left(x) <= f);
    prev = f;
  }
}

}  // namespace

TEST_CASE("std_poisson_cdf against the pmf oracle") {
  CHECK(std_poisson_cdf(1.0, -1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(std_poisson_cdf(4.0, 0.0) == doctest::Approx(oracle::poisson_cdf(4.0, 4)).epsilon(1e-13));
  CHECK(std_poisson_cdf(4.0, 0.0) == doctest::Approx(0.62884).epsilon(1e-5));
  CHECK(std_poisson_cdf(3.0, 1e6) == 1.0);
  CHECK(std_poisson_cdf(3.0, -1e6) == 0.0);
  for (double lambda : {0.2, 1.0, 7.5, 60.0}) {
    const double root = std::sqrt(lambda);
    for (long k = 0; k < 3 * lambda + 10; ++k) {
      const double x = (static_cast<double>(k) - lambda) / root;
      CHECK(std_poisson_cdf(lambda, x) ==
            doctest::Approx(oracle::poisson_cdf(lambda, k)).epsilon(1e-12));
      // Just below the atom the mass of k is missing.
      const StandardizedPoisson p(lambda);
      CHECK(p.cdf_left(x) ==
            doctest::Approx(oracle::poisson_cdf(lambda, k - 1)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(std_poisson_cdf(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(std_poisson_cdf(-2.0, 1.0), DomainError);
}

TEST_CASE("standardized Poisson lattice has mean 0 and variance 1") {
  for (double lambda : {0.05, 0.5, 1.0, 4.0, 50.0, 1000.0}) {
    const StandardizedPoisson p(lambda);
    double mass = 0.0, m1 = 0.0, m2 = 0.0;
    const auto last = static_cast<std::uint64_t>(lambda + 40.0 * std::sqrt(lambda) + 60.0);
    for (std::uint64_t k = 0; k <= last; ++k) {
      const double w = p.pmf(k);
      const double x = p.lattice_point(k);
      mass += w;
      m1 += w * x;
      m2 += w * x * x;
    }
    CHECK(std::abs(mass - 1.0) < 1e-12);
    CHECK(std::abs(m1) < 1e-10);
    CHECK(std::abs(m2 - 1.0) < 1e-10);
  }
}

TEST_CASE("log_law_cdf") {
  CHECK(log_law_cdf(2.0, std::numbers::sqrt2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(log_law_cdf(2.0, 1.0) == 0.0);
  CHECK(log_law_cdf(std::numbers::e, std::numbers::e) == 1.0);
  CHECK(log_law_cdf(3.0, 0.5) == 0.0);
  CHECK(log_law_cdf(3.0, 9.0) == 1.0);
  CHECK_THROWS_AS(log_law_cdf(1.0, 1.5), DomainError);
  CHECK_THROWS_AS(log_law_cdf(0.5, 1.5), DomainError);
}

TEST_CASE("every distribution has a proper monotone cdf") {
  check_monotone(Normal(0.5, 2.0), -10, 10);
  check_monotone(Normal(1.0, 0.0), -1, 3);
  check_monotone(PointMass(0.25), -1, 1);
  check_monotone(Uniform(-1.0, 3.0), -3, 5);
  check_monotone(StandardizedPoisson(2.5), -3, 6);
  check_monotone(LogarithmicLaw(5.0), 0, 6);
  check_monotone(EmpiricalDistribution({3.0, 1.0, 2.0, 2.0}), 0, 4);

  // Continuous laws reach 0 and 1 one unit outside their support.
  const Uniform u(-1.0, 3.0);
  CHECK(u.cdf(u.support().lo - 1) <= 1e-12);
  CHECK(u.cdf(u.support().hi + 1) >= 1 - 1e-12);
  const LogarithmicLaw l(5.0);
  CHECK(l.cdf(l.support().lo - 1) <= 1e-12);
  CHECK(l.cdf(l.support().hi + 1) >= 1 - 1e-12);
  const Normal n(0.0, 1.0);
  CHECK(n.cdf(-40.0) <= 1e-12);
  CHECK(n.cdf(40.0) >= 1 - 1e-12);
}

TEST_CASE("empirical distribution") {
  const EmpiricalDistribution e({3.0, 1.0, 2.0, 2.0});
  CHECK(e.size() == 4);
  CHECK(e.cdf(0.5) == 0.0);
  CHECK(e.cdf(1.0) == 0.25);
  CHECK(e.cdf_left(2.0) == 0.25);
  CHECK(e.cdf(2.0) == 0.75);
  CHECK(e.cdf(3.0) == 1.0);
  CHECK(e.quantile(0.25) == 1.0);
  CHECK(e.quantile(0.5) == 2.0);
  CHECK(e.quantile(1.0) == 3.0);
  CHECK(e.mean() == 2.0);
  CHECK(e.variance() == doctest::Approx(2.0 / 3.0));  // unbiased
  // Quantiles are order consistent.
  double prev = e.quantile(0.01);
  for (double p = 0.02; p <= 1.0; p += 0.01) {
    CHECK(e.quantile(p) >= prev);
    prev = e.quantile(p);
  }
}

TEST_CASE("mixture_cdf examples") {
  auto gauss = std::make_shared<GaussianScaleFamily>(1, 1.0);
  const MixtureLaw point(gauss, MixingLaw::point({1.0}));
  CHECK(mixture_cdf(point, 0.0) == 0.5);

  auto constant = std::make_shared<ConstantFamily>(1, std::make_shared<Normal>(0.0, 1.0));
  const MixtureLaw same(constant, MixingLaw::uniform_box({0.0}, {2.0}));
  CHECK(mixture_cdf(same, 1.6449) == doctest::Approx(0.95).epsilon(1e-4));

  const MixtureLaw spread(gauss, MixingLaw::uniform_box({1.0}, {2.0}));
  const double ref = oracle::gauss_legendre(
      [](double t) { return oracle::phi(1.0 / std::sqrt(t)); }, 1.0, 2.0);
  CHECK(std::abs(mixture_cdf(spread, 1.0) - ref) < 1e-8);
  for (double x : {-2.5, -0.7, 0.3, 1.9}) {
    const double r = oracle::gauss_legendre(
        [x](double t) { return oracle::phi(x / std::sqrt(t)); }, 1.0, 2.0);
    CHECK(std::abs(mixture_cdf(spread, x) - r) < 1e-8);
  }
  // Logarithmic mixing: density 1/(t log 2) on [1, 2].
  const MixtureLaw logmix(gauss, MixingLaw::logarithmic(2.0));
  const double lr = oracle::gauss_legendre(
      [](double t) { return oracle::phi(0.8 / std::sqrt(t)) / (t * std::numbers::ln2); }, 1.0,
      2.0);
  CHECK(std::abs(mixture_cdf(logmix, 0.8) - lr) < 1e-8);
}

TEST_CASE("uniform box mixtures agree with a two-dimensional Gauss-Legendre rule") {
  auto g2 = std::make_shared<GaussianScaleFamily>(2, 0.25);
  const MixtureLaw m(g2, MixingLaw::uniform_box({0.0, 0.5}, {2.0, 1.5}));
  for (double x : {-1.2, -0.4, -0.01, 0.0, 0.2, 0.9, 2.5}) {
    // Tensor rule on [0,2] x [0.5,1.5], density 1/2.
    const double v = 0.5 * oracle::gauss_legendre(
                               [&](double t1) {
                                 return oracle::gauss_legendre(
                                     [&](double t2) {
                                       const double var = 0.25 * t1 * t2;
                                       return var == 0.0 ? (x >= 0.0 ? 1.0 : 0.0)
                                                         : oracle::phi(x / std::sqrt(var));
                                     },
                                     0.5, 1.5);
                               },
                               0.0, 2.0);
    // The oracle rule loses accuracy near t1 = 0; the closed form does not.
    CHECK(mixture_cdf(m, x) == doctest::Approx(v).epsilon(1e-4));
  }
}

TEST_CASE("closed-form uniform mixing matches generic quadrature") {
  auto g1 = std::make_shared<GaussianScaleFamily>(1, 1.0);
  auto g2 = std::make_shared<GaussianScaleFamily>(2, 0.25);
  const auto flat = [](double density) {
    return [density](std::span<const double>) { return density; };
  };
  const auto none = [](Rng&) { return std::vector<double>{}; };
  const MixtureLaw fast1(g1, MixingLaw::uniform_box({0.5}, {2.0}));
  const MixtureLaw slow1(g1, MixingLaw::continuous({0.5}, {2.0}, flat(1.0 / 1.5), none, "u"));
  const MixtureLaw fast2(g2, MixingLaw::uniform_box({0.5, 1.0}, {2.0, 3.0}));
  const MixtureLaw slow2(
      g2, MixingLaw::continuous({0.5, 1.0}, {2.0, 3.0}, flat(1.0 / 3.0), none, "u2"));
  for (double x : {-2.0, -0.7, -0.05, 0.0, 0.3, 1.1, 3.0}) {
    CHECK(std::abs(fast1.cdf(x) - slow1.cdf(x)) < 5e-8);  // Simpson tolerance
    CHECK(std::abs(fast2.cdf(x) - slow2.cdf(x)) < 1e-7);
  }
}

TEST_CASE("discrete mixture cdf equals the weighted sum") {
  auto poisson = std::make_shared<StdPoissonFamily>();
  const MixtureLaw m(poisson, MixingLaw::discrete({{{0.5}, 0.25}, {{0.0}, 0.5}, {{0.1}, 0.25}}));
  for (double x = -3.0; x <= 4.0; x += 0.0625) {
    const double hand = 0.25 * std_poisson_cdf(2.0, x) + 0.5 * oracle::phi(x) +
                        0.25 * std_poisson_cdf(10.0, x);
    CHECK(std::abs(mixture_cdf(m, x) - hand) <= 1e-14);
  }
}

TEST_CASE("mixing law validation") {
  CHECK_THROWS_AS(MixingLaw::discrete({{{0.5}, 0.5}, {{1.0}, 0.4}}), DomainError);
  CHECK_THROWS_AS(MixingLaw::discrete({{{0.5}, 1.5}, {{1.0}, -0.5}}), DomainError);
  CHECK_THROWS_AS(MixingLaw::continuous(
                      {0.0}, {1.0}, [](std::span<const double>) { return 2.0; },
                      [](Rng& rng) { return std::vector<double>{rng.uniform()}; }, "bad"),
                  DomainError);
  CHECK_NOTHROW(MixingLaw::continuous(
      {0.0}, {1.0}, [](std::span<const double> t) { return 2.0 * t[0]; },
      [](Rng& rng) { return std::vector<double>{std::sqrt(rng.uniform())}; }, "triangle"));
  CHECK_THROWS_AS(MixingLaw::parse("gamma:1", 1), ConfigError);
  CHECK_THROWS_AS(MixingLaw::parse("point:1,2", 1), ConfigError);
  CHECK(MixingLaw::parse("discrete:0.5@0.5;0@0.5", 1).atoms().size() == 2);
  CHECK(MixingLaw::parse("uniform:0,2", 2).dimension() == 2);
}

TEST_CASE("mixture sampling") {
  auto gauss = std::make_shared<GaussianScaleFamily>(1, 1.0);
  SUBCASE("point mixing reproduces the component") {
    const MixtureLaw m(gauss, MixingLaw::point({1.7}));
    const auto e = draw(m, 100000, 11);
    CHECK(ks_distance(e, Normal(0.0, 1.7)) < 0.01);
  }
  SUBCASE("uniform[1,2] scale mixture has variance 1.5") {
    const MixtureLaw m(gauss, MixingLaw::uniform_box({1.0}, {2.0}));
    const auto e = draw(m, 100000, 12);
    CHECK(std::abs(e.variance() - 1.5) < 0.02);
  }
  SUBCASE("standardized Poisson component is centred and scaled") {
    const MixtureLaw m(std::make_shared<StdPoissonFamily>(), MixingLaw::point({0.5}));
    const auto e = draw(m, 100000, 13);
    CHECK(std::abs(e.mean()) < 0.02);
    CHECK(std::abs(e.variance() - 1.0) < 0.05);
  }
}

TEST_CASE("Gaussian scale family is continuous in t") {
  const GaussianScaleFamily f(1, 0.25);
  for (double x : {-1.0, -0.1, 0.2, 2.0}) {
    for (double t = 0.0; t < 3.0; t += 0.01) {
      const std::vector<double> a{t}, b{t + 1e-7};
      CHECK(std::abs(f.cdf(a, x) - f.cdf(b, x)) < 1e-4);
    }
  }
  // |t| = 0 is the point mass at 0.
  const std::vector<double> zero{0.0};
  CHECK(f.cdf(zero, -1e-9) == 0.0);
  CHECK(f.cdf(zero, 0.0) == 1.0);
  const GaussianScaleFamily f2(2, 1.0);
  const std::vector<double> t2{2.0, 0.5};
  CHECK(f2.variance_at(t2) == 1.0);
}

TEST_CASE("standardized Poisson family tends to N(0,1) as t -> 0") {
  const StdPoissonFamily f;
  double prev = 1.0;
  for (double t : {1.0, 0.1, 0.01, 0.001}) {
    const std::vector<double> tt{t};
    double worst = 0.0;
    for (double x = -3.0; x <= 3.0; x += 0.01) {
      worst = std::max(worst, std::abs(f.cdf(tt, x) - oracle::phi(x)));
    }
    CHECK(worst < prev);
    prev = worst;
  }
  const std::vector<double> zero{0.0};
  CHECK(f.cdf(zero, 0.3) == doctest::Approx(oracle::phi(0.3)));
}

TEST_CASE("allocation regime family follows classify_regime") {
  const AllocationRegimeFamily f(0);
  const std::vector<double> normal{0.0, 0.0};
  const std::vector<double> poisson{0.5, 0.0};
  const std::vector<double> bad{0.5, 0.5};
  CHECK(f.cdf(normal, 0.0) == doctest::Approx(0.5));
  CHECK(f.cdf(poisson, 0.0) == doctest::Approx(oracle::poisson_cdf(2.0, 2)));
  CHECK_THROWS_AS(f.at(bad), DomainError);
}
