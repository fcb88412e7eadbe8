// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include "errors.hpp"
#include "mc_engine.hpp"
#include "rng.hpp"

using namespace transferlab;

TEST_CASE("seed derivation is a pure function of (master, stream)") {
  CHECK(derive_seed({1, 2}) == derive_seed({1, 2}));
  std::set<std::uint64_t> seen;
  for (std::uint64_t m = 0; m < 50; ++m) {
    for (std::uint64_t s = 0; s < 50; ++s) seen.insert(derive_seed({m, s}));
  }
  CHECK(seen.size() == 2500);
  // Known value of the splitmix64 finalizer: mix64(0) = 0, mix64(1) != 1.
  CHECK(mix64(0) == 0);
  CHECK(mix64(1) == 0x5692161d100b05e5ULL);
}

TEST_CASE("rng primitives") {
  Rng rng(7, 3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(rng.uniform_open() > 0.0);
    CHECK(rng.index(7) < 7);
  }
  // index(n) is uniform: chi-square over 10 cells.
  std::vector<int> cells(10, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++cells[rng.index(10)];
  double chi2 = 0.0;
  for (int c : cells) chi2 += (c - n / 10.0) * (c - n / 10.0) / (n / 10.0);
  CHECK(chi2 < 27.9);  // 0.999 quantile, 9 degrees of freedom
  // Binomial and Poisson means.
  double sb = 0.0, sp = 0.0;
  for (int i = 0; i < n; ++i) {
    sb += static_cast<double>(rng.binomial(1000, 0.25));
    sp += static_cast<double>(rng.poisson(3.5));
  }
  CHECK(std::abs(sb / n - 250.0) < 0.5);
  CHECK(std::abs(sp / n - 3.5) < 0.03);
}

TEST_CASE("constant task gives ten ones") {
  ReplicationPlan plan;
  plan.replicates = 10;
  const auto e = run_replicated(plan, [](Rng&) { return 1.0; });
  CHECK(e.size() == 10);
  for (double v : e.values()) CHECK(v == 1.0);
}

TEST_CASE("identical plans give identical samples regardless of workers") {
  ReplicationPlan plan;
  plan.replicates = 5000;
  plan.chunk_size = 37;
  plan.seed = {99, 5};
  auto task = [](Rng& rng) { return rng.normal() + rng.uniform(); };
  plan.workers = 1;
  const auto a = run_replicated(plan, task);
  const auto b = run_replicated(plan, task);
  plan.workers = 4;
  const auto c = run_replicated(plan, task);
  plan.chunk_size = 1;
  const auto d = run_replicated(plan, task);
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  CHECK(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
  CHECK(std::equal(a.values().begin(), a.values().end(), d.values().begin()));
  // Replicate order is kept before sorting: element i uses stream base + i.
  plan.replicates = 3;
  const auto raw = replicate<double>(plan, [](Rng& rng) { return rng.uniform(); });
  for (std::size_t i = 0; i < 3; ++i) {
    Rng r(SeedSpec{99, 5 + i});
    CHECK(raw[i] == r.uniform());
  }
}

TEST_CASE("normal draws satisfy the CLT bound") {
  ReplicationPlan plan;
  plan.replicates = 100000;
  plan.seed = {2024, 0};
  const auto e = run_replicated(plan, [](Rng& rng) { return rng.normal(); });
  CHECK(std::abs(e.mean()) < 0.011);
  CHECK(std::abs(e.variance() - 1.0) < 0.02);
}

TEST_CASE("distinct streams are uncorrelated") {
  // At n = 10^4 the null sd of r is 0.01, so the 0.01 bound is applied to the
  // mean |r| over 64 stream pairs (null mean 0.008); single pairs get 4.5 sd.
  const int n = 10000;
  double mean_abs = 0.0;
  const int pairs = 64;
  for (std::uint64_t s = 0; s < pairs; ++s) {
    Rng a(1, 2 * s), b(1, 2 * s + 1);
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (int i = 0; i < n; ++i) {
      const double x = a.uniform(), y = b.uniform();
      sa += x;
      sb += y;
      sab += x * y;
      saa += x * x;
      sbb += y * y;
    }
    const double cov = sab / n - sa / n * sb / n;
    const double r = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
    CHECK(std::abs(r) < 0.045);
    mean_abs += std::abs(r) / pairs;
  }
  CHECK(mean_abs < 0.01);
}

TEST_CASE("a failing replicate aborts with its index") {
  ReplicationPlan plan;
  plan.replicates = 1000;
  plan.workers = 4;
  plan.chunk_size = 8;
  try {
    replicate<double>(plan, [](Rng& rng) -> double {
      // Replicate 123 is identified through its stream.
      Rng probe(SeedSpec{0, 123});
      if (rng.bits() == probe.bits()) throw std::runtime_error("boom");
      return 0.0;
    });
    FAIL("expected ReplicateError");
  } catch (const ReplicateError& e) {
    CHECK(e.replicate_index() == 123);
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
  }
  plan.replicates = 0;
  CHECK_THROWS(replicate<double>(plan, [](Rng&) { return 0.0; }));
}

TEST_CASE("worker cap from the environment") {
  CHECK(resolve_workers(3) == 3);
  setenv(kWorkersEnv, "2", 1);
  CHECK(resolve_workers(0) == 2);
  unsetenv(kWorkersEnv);
  CHECK(resolve_workers(0) >= 1);
}
