// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include "experiments/na_field.hpp"

#include <cmath>

#include "errors.hpp"
#include "families.hpp"

namespace transferlab {

namespace {

std::vector<double> mixing_upper(const MixingLaw& rho) {
  std::vector<double> hi(rho.dimension(), 0.0);
  if (rho.is_discrete()) {
    for (const auto& a : rho.atoms()) {
      for (std::size_t i = 0; i < hi.size(); ++i) hi[i] = std::max(hi[i], a.t[i]);
    }
  } else {
    for (std::size_t i = 0; i < hi.size(); ++i) hi[i] = rho.upper()[i];
  }
  return hi;
}

std::vector<std::uint64_t> scaled_index(std::span<const std::uint64_t> n,
                                        std::span<const double> t) {
  std::vector<std::uint64_t> N(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double v = std::floor(static_cast<double>(n[i]) * t[i]);
    N[i] = v < 1.0 ? 1 : static_cast<std::uint64_t>(v);
  }
  return N;
}

void validate(const NAFieldConfig& cfg) {
  if (!(cfg.a > 0.0 && cfg.a < 1.0)) throw ConfigError("NA field: a must lie in (0, 1)");
  if (cfg.n.empty()) throw ConfigError("NA field: lattice size needs at least one dimension");
  for (auto v : cfg.n) {
    if (v == 0) throw ConfigError("NA field: lattice sizes must be >= 1");
  }
  if (cfg.mixing.dimension() != cfg.n.size()) {
    throw ConfigError("NA field: mixing law dimension differs from d");
  }
  if (!cfg.mixing.is_discrete()) {
    for (double v : cfg.mixing.lower()) {
      if (v < 0.0) throw ConfigError("NA field: rho must live on [0, inf)^d");
    }
  } else {
    for (const auto& atom : cfg.mixing.atoms()) {
      for (double v : atom.t) {
        if (v < 0.0) throw ConfigError("NA field: rho must live on [0, inf)^d");
      }
    }
  }
  const auto hi = mixing_upper(cfg.mixing);
  const auto N = scaled_index(cfg.n, hi);
  double sites = static_cast<double>(N[0] + 1);
  for (std::size_t i = 1; i < N.size(); ++i) sites *= static_cast<double>(N[i]);
  if (sites > static_cast<double>(cfg.max_sites)) {
    throw ConfigError("NA field: lattice of " + std::to_string(sites) +
                      " sites exceeds the memory bound of " + std::to_string(cfg.max_sites));
  }
}

}  // namespace

double na_partial_sum_variance(double a, std::span<const std::uint64_t> N) {
  if (N.empty()) throw DomainError("partial sum variance: empty index");
  const double row = 1.0 + a * a + (1.0 - a) * (1.0 - a) * (static_cast<double>(N[0]) - 1.0);
  double rows = 1.0;
  for (std::size_t i = 1; i < N.size(); ++i) rows *= static_cast<double>(N[i]);
  return row * rows;
}

FieldCovariance na_field_covariance(double a, std::size_t dim, std::uint64_t sites, Rng& rng) {
  if (dim == 0 || sites < 16) throw DomainError("field covariance: bad lattice");
  std::uint64_t len1 = sites;
  std::uint64_t len2 = 1;
  if (dim >= 2) {
    len1 = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(sites)));
    len2 = len1;
  }
  // eps on (len1 + 1) x len2, X on len1 x len2; e_1 is the fast axis.
  std::vector<double> x(len1 * len2);
  for (std::uint64_t j = 0; j < len2; ++j) {
    double current = rng.normal();
    for (std::uint64_t i = 0; i < len1; ++i) {
      const double next = rng.normal();
      x[j * len1 + i] = current - a * next;
      current = next;
    }
  }
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  auto cov = [&](std::uint64_t shift1, std::uint64_t shift2) {
    double s = 0.0;
    std::uint64_t count = 0;
    for (std::uint64_t j = 0; j + shift2 < len2; ++j) {
      for (std::uint64_t i = 0; i + shift1 < len1; ++i) {
        s += (x[j * len1 + i] - mean) * (x[(j + shift2) * len1 + i + shift1] - mean);
        ++count;
      }
    }
    return s / static_cast<double>(count);
  };
  FieldCovariance out;
  out.variance = cov(0, 0);
  out.lag1 = cov(1, 0);
  out.lag2 = cov(2, 0);
  if (dim >= 2) out.cross = cov(0, 1);
  return out;
}

NAFieldResult run_na_field(const NAFieldConfig& cfg, const ReplicationPlan& plan) {
  validate(cfg);
  const std::size_t dim = cfg.n.size();
  double volume = 1.0;
  for (auto v : cfg.n) volume *= static_cast<double>(v);
  const double scale = 1.0 / std::sqrt(volume);
  const double a = cfg.a;

  auto empirical = run_replicated(plan, [&](Rng& rng) {
    const auto t = cfg.mixing.sample(rng);
    const auto N = scaled_index(cfg.n, t);
    const std::uint64_t len1 = N[0] + 1;
    std::uint64_t rows = 1;
    for (std::size_t i = 1; i < dim; ++i) rows *= N[i];
    std::vector<double> eps(len1 * rows);
    for (auto& e : eps) e = rng.normal();
    double sum = 0.0;
    for (std::uint64_t r = 0; r < rows; ++r) {
      const double* row = eps.data() + r * len1;
      for (std::uint64_t i = 0; i < N[0]; ++i) sum += row[i] - a * row[i + 1];
    }
    return scale * sum;
  });

  NAFieldResult result;
  result.sigma2 = (1.0 - a) * (1.0 - a);
  auto family = std::make_shared<GaussianScaleFamily>(dim, result.sigma2);
  result.transfer = TransferResult{std::move(empirical),
                                   std::make_shared<MixtureLaw>(family, cfg.mixing)};
  if (cfg.mixing.is_discrete() && cfg.mixing.atoms().size() == 1) {
    const auto N = scaled_index(cfg.n, cfg.mixing.atoms()[0].t);
    result.finite_n.emplace(0.0, na_partial_sum_variance(a, N) / volume);
  }
  Rng diag(SeedSpec{plan.seed.master_seed, plan.seed.stream_id + plan.replicates});
  result.covariance = na_field_covariance(a, dim, cfg.diagnostic_sites, diag);
  return result;
}

}  // namespace transferlab
