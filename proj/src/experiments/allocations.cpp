// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include "experiments/allocations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "families.hpp"

namespace transferlab {

namespace {

void validate(unsigned r, std::uint64_t n, std::uint64_t N) {
  if (N == 0) throw DomainError("allocations: need N >= 1 boxes");
  if (r > n) {
    throw DomainError("allocations: need 0 <= r <= n (r=" + std::to_string(r) +
                      ", n=" + std::to_string(n) + ")");
  }
}

double log_choose(std::uint64_t n, std::uint64_t r) {
  if (r > n - r) r = n - r;
  if (r <= 64) {
    double s = 0.0;
    for (std::uint64_t i = 0; i < r; ++i) {
      s += std::log(static_cast<double>(n - i) / static_cast<double>(i + 1));
    }
    return s;
  }
  const double nn = static_cast<double>(n);
  const double rr = static_cast<double>(r);
  return std::lgamma(nn + 1.0) - std::lgamma(rr + 1.0) - std::lgamma(nn - rr + 1.0);
}

std::string describe_index(unsigned r, std::uint64_t n, std::uint64_t N) {
  std::ostringstream os;
  os << "(r=" << r << ", n=" << n << ", N=" << N << ")";
  return os.str();
}

}  // namespace

double alloc_exact_mean(unsigned r, std::uint64_t n, std::uint64_t N) {
  validate(r, n, N);
  if (N == 1) return n == r ? 1.0 : 0.0;
  const double fN = static_cast<double>(N);
  const double log_p = log_choose(n, r) - static_cast<double>(r) * std::log(fN) +
                       static_cast<double>(n - r) * std::log1p(-1.0 / fN);
  return fN * std::exp(log_p);
}

double alloc_exact_var(unsigned r, std::uint64_t n, std::uint64_t N) {
  validate(r, n, N);
  if (N == 1) return 0.0;
  const double mean = alloc_exact_mean(r, n, N);
  const bool pair_possible = n >= 2ULL * r && (N > 2 || n == 2ULL * r);
  double var = 0.0;
  if (!pair_possible) {
    var = mean - mean * mean;
  } else {
    const double fN = static_cast<double>(N);
    const double rr = static_cast<double>(r);
    double log_ratio = std::log1p(-1.0 / fN);
    for (unsigned i = 0; i < r; ++i) {
      log_ratio += std::log1p(-rr / static_cast<double>(n - i));
    }
    if (n > 2ULL * r) {
      log_ratio += static_cast<double>(n - 2ULL * r) * std::log1p(-2.0 / fN);
    }
    log_ratio -= static_cast<double>(2 * (n - r)) * std::log1p(-1.0 / fN);
    var = mean + mean * mean * std::expm1(log_ratio);
  }
  return var < 0.0 ? 0.0 : var;
}

std::uint64_t simulate_occupancy(unsigned r, std::uint64_t n, std::uint64_t N, Rng& rng) {
  validate(r, n, N);
  if (N > (std::uint64_t{1} << 32)) throw DomainError("allocations: too many boxes");
  std::vector<std::uint32_t> counts(N, 0);
  for (std::uint64_t ball = 0; ball < n; ++ball) ++counts[rng.index(N)];
  return static_cast<std::uint64_t>(
      std::count(counts.begin(), counts.end(), static_cast<std::uint32_t>(r)));
}

AllocationPath parse_allocation_path(std::string_view text) {
  if (text == "central") return AllocationPath::central;
  if (text == "sparse") return AllocationPath::sparse;
  if (text == "dense") return AllocationPath::dense;
  throw ConfigError("unknown allocation path '" + std::string(text) + "'");
}

std::string to_string(AllocationPath path) {
  switch (path) {
    case AllocationPath::central: return "central";
    case AllocationPath::sparse: return "sparse";
    case AllocationPath::dense: return "dense";
  }
  return "?";
}

AllocationIndex canonical_path(unsigned r, AllocationPath path, std::uint64_t boxes,
                               double lambda) {
  if (boxes < 2) throw ConfigError("allocation paths need N >= 2");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("allocation paths need lambda > 0");
  }
  AllocationIndex idx;
  idx.boxes = boxes;
  idx.path = path;
  auto mean = [&](std::uint64_t n) { return alloc_exact_mean(r, n, boxes); };
  // Of n and its left neighbour, the one whose mean is closer to lambda.
  auto closer = [&](std::uint64_t n, std::uint64_t lo) {
    if (n > lo && std::abs(mean(n - 1) - lambda) <= std::abs(mean(n) - lambda)) return n - 1;
    return n;
  };

  switch (path) {
    case AllocationPath::central:
      idx.balls = std::max<std::uint64_t>(boxes, r);
      idx.limit = RegimePoint{0.0, 0.0, false};
      return idx;
    case AllocationPath::sparse: {
      if (r == 1) throw ConfigError("r = 1 has no sparse Poisson regime; use the dense path");
      if (r == 0) {
        const double n = std::round(std::sqrt(2.0 * static_cast<double>(boxes) * lambda));
        idx.balls = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
        idx.limit = RegimePoint{1.0 / lambda, 0.0, false};
        return idx;
      }
      // Rising branch: mean increases on [r, r N].
      std::uint64_t lo = r;
      std::uint64_t hi = static_cast<std::uint64_t>(r) * boxes;
      if (mean(hi) < lambda) throw ConfigError("sparse path: lambda above the peak mean");
      while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (mean(mid) >= lambda) hi = mid; else lo = mid + 1;
      }
      idx.balls = closer(lo, r);
      idx.limit = RegimePoint{0.0, 1.0 / lambda, false};
      return idx;
    }
    case AllocationPath::dense: {
      std::uint64_t lo = std::max<std::uint64_t>(1, r) * boxes;
      if (mean(lo) <= lambda) throw ConfigError("dense path: lambda above the peak mean");
      std::uint64_t hi = 2 * lo;
      while (mean(hi) > lambda) {
        if (hi > (std::uint64_t{1} << 40)) throw ConfigError("dense path: no solution");
        hi *= 2;
      }
      while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (mean(mid) <= lambda) hi = mid; else lo = mid + 1;
      }
      idx.balls = closer(lo, std::max<std::uint64_t>(1, r) * boxes);
      idx.limit = RegimePoint{0.0, 1.0 / lambda, false};
      return idx;
    }
  }
  throw ConfigError("unknown allocation path");
}

AllocationResult run_allocations(const AllocationConfig& cfg, const ReplicationPlan& plan) {
  if (cfg.index_law.empty()) throw ConfigError("allocations: empty index law");
  const std::size_t choices = cfg.index_law.size();
  AllocationResult result;
  std::vector<double> sd(choices);
  std::vector<double> cumulative(choices);
  double total = 0.0;
  for (std::size_t i = 0; i < choices; ++i) {
    const auto& c = cfg.index_law[i];
    const auto n = c.index.balls;
    const auto N = c.index.boxes;
    if (n < cfg.r) {
      throw ConfigError("allocations: index " + describe_index(cfg.r, n, N) + " has n < r");
    }
    if (!(c.weight > 0.0)) throw ConfigError("allocations: index weights must be positive");
    const double m = alloc_exact_mean(cfg.r, n, N);
    const double v = alloc_exact_var(cfg.r, n, N);
    if (!(v > 0.0)) {
      throw ConfigError("allocations: zero variance at " + describe_index(cfg.r, n, N));
    }
    if (classify_regime(cfg.r, c.index.limit).kind == LimitTag::Kind::undefined) {
      throw ConfigError("allocations: limit point of " + describe_index(cfg.r, n, N) +
                        " is outside Delta");
    }
    result.means.push_back(m);
    result.variances.push_back(v);
    sd[i] = std::sqrt(v);
    total += c.weight;
    cumulative[i] = total;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("allocations: index weights must sum to 1");

  struct Draw {
    double value;
    double half_width;
  };
  const auto draws = replicate<Draw>(plan, [&](Rng& rng) {
    std::size_t i = 0;
    if (choices > 1) {
      const double u = rng.uniform() * total;
      i = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                   cumulative.begin());
      i = std::min(i, choices - 1);
    }
    const auto& idx = cfg.index_law[i].index;
    const auto count = simulate_occupancy(cfg.r, idx.balls, idx.boxes, rng);
    return Draw{(static_cast<double>(count) - result.means[i]) / sd[i], 0.5 / sd[i]};
  });
  result.values.reserve(draws.size());
  result.half_widths.reserve(draws.size());
  for (const auto& d : draws) {
    result.values.push_back(d.value);
    result.half_widths.push_back(d.half_width);
  }
  result.empirical = EmpiricalDistribution(result.values);

  auto family = std::make_shared<AllocationRegimeFamily>(cfg.r);
  if (choices == 1) {
    const auto& lim = cfg.index_law[0].index.limit;
    result.target = family->at(std::vector<double>{lim.g, lim.d});
  } else {
    std::vector<MixingLaw::Atom> atoms;
    for (const auto& c : cfg.index_law) {
      atoms.push_back({{c.index.limit.g, c.index.limit.d}, c.weight});
    }
    result.target = std::make_shared<MixtureLaw>(family, MixingLaw::discrete(std::move(atoms)));
  }
  return result;
}

}  // namespace transferlab
