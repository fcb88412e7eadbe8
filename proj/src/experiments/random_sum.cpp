// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include "experiments/random_sum.hpp"

#include <cmath>

#include "errors.hpp"
#include "families.hpp"

namespace transferlab {

namespace {

void validate(const RandomSumConfig& cfg) {
  if (cfg.k_seq.empty()) throw ConfigError("random sum: need at least one dimension");
  if (cfg.stage == 0) throw ConfigError("random sum: stage n must be >= 1");
  if (cfg.mixing.dimension() != cfg.k_seq.size()) {
    throw ConfigError("random sum: mixing law dimension differs from d");
  }
  const auto bound_ok = [](double v) { return v >= 0.0 && std::isfinite(v); };
  if (cfg.mixing.is_discrete()) {
    for (const auto& a : cfg.mixing.atoms()) {
      for (double v : a.t) {
        if (!bound_ok(v)) throw ConfigError("random sum: rho must live on [0, inf)^d");
      }
    }
  } else {
    for (double v : cfg.mixing.lower()) {
      if (!bound_ok(v)) throw ConfigError("random sum: rho must live on [0, inf)^d");
    }
  }
  double worst = 1.0;
  for (std::size_t i = 0; i < cfg.k_seq.size(); ++i) {
    double hi = 0.0;
    if (cfg.mixing.is_discrete()) {
      for (const auto& a : cfg.mixing.atoms()) hi = std::max(hi, a.t[i]);
    } else {
      hi = cfg.mixing.upper()[i];
    }
    worst *= std::max(1.0, std::floor(cfg.k_seq[i].value(cfg.stage) * hi));
  }
  if (worst > static_cast<double>(cfg.max_terms)) {
    throw ConfigError("random sum: up to " + std::to_string(worst) +
                      " terms per replicate exceeds the limit");
  }
}

}  // namespace

MultiIndex random_sum_index(const RandomSumConfig& cfg, std::span<const double> t) {
  std::vector<std::uint64_t> coords(cfg.k_seq.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const double scaled = std::floor(cfg.k_seq[i].value(cfg.stage) * t[i]);
    coords[i] = scaled < 1.0 ? 1 : static_cast<std::uint64_t>(scaled);
  }
  return MultiIndex(std::move(coords));
}

TransferResult run_random_sum(const RandomSumConfig& cfg, const ReplicationPlan& plan) {
  validate(cfg);
  double volume = 1.0;
  for (const auto& k : cfg.k_seq) volume *= k.value(cfg.stage);
  const double scale = 1.0 / std::sqrt(volume);

  auto empirical = run_replicated(plan, [&](Rng& rng) {
    const auto t = cfg.mixing.sample(rng);
    const auto index = random_sum_index(cfg, t);
    const std::uint64_t terms = index.volume();
    double sum = 0.0;
    for (std::uint64_t j = 0; j < terms; ++j) sum += scale * rng.normal();
    return sum;
  });
  auto family = std::make_shared<GaussianScaleFamily>(cfg.k_seq.size(), 1.0);
  auto target = std::make_shared<MixtureLaw>(family, cfg.mixing);
  return TransferResult{std::move(empirical), std::move(target)};
}

}  // namespace transferlab
