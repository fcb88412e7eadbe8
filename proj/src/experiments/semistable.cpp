// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include "experiments/semistable.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "errors.hpp"
#include "harmonic.hpp"

namespace transferlab {

namespace {

constexpr unsigned kExactBits = 62;
constexpr double kEulerGamma = 0.57721566490153286061;

// Block boundaries k_0 = 1 < k_1 < ... covering [1, n].
std::vector<std::uint64_t> block_starts(std::uint64_t n, const SamplingSequence& k_seq) {
  std::vector<std::uint64_t> starts;
  if (k_seq.kind() == SamplingSequence::Kind::power_of_two) {
    for (unsigned p = 0; p < 63; ++p) {
      const std::uint64_t k = std::uint64_t{1} << p;
      if (k > n) break;
      starts.push_back(k);
    }
    return starts;
  }
  if (k_seq.kind() != SamplingSequence::Kind::geometric) {
    throw DomainError("mantissa blocks need a geometric sampling sequence");
  }
  const double c = k_seq.ratio();
  std::uint64_t k = 1;
  double power = 1.0;
  while (k <= n) {
    starts.push_back(k);
    power *= c;
    if (power >= 0x1.0p62) break;
    k = std::max(k + 1, static_cast<std::uint64_t>(std::llround(power)));
  }
  return starts;
}

// The mantissa m / start rounded exactly as mantissa_psi rounds it.
double rounded_ratio(std::uint64_t m, std::uint64_t start) {
  return static_cast<double>(static_cast<long double>(m) / static_cast<long double>(start));
}

// Largest integer m whose rounded mantissa m / start is <= t (< t when
// strict), so the cdf counts the same atoms the sampler produces.
std::uint64_t scaled_floor(double t, std::uint64_t start, bool strict) {
  const long double prod = static_cast<long double>(t) * static_cast<long double>(start);
  if (prod <= 0.0L) return 0;
  if (prod >= 0x1.0p62L) return ~std::uint64_t{0} >> 1;
  auto m = static_cast<std::uint64_t>(std::floor(prod));
  auto below = [&](std::uint64_t k) {
    const double r = rounded_ratio(k, start);
    return strict ? r < t : r <= t;
  };
  while (below(m + 1)) ++m;
  while (m > 0 && !below(m)) --m;
  return m;
}

double pushforward(std::uint64_t n, const SamplingSequence& k_seq, double t, bool strict) {
  if (n == 0) throw DomainError("psi pushforward: horizon must be >= 1");
  if (std::isnan(t)) throw DomainError("psi pushforward at NaN");
  const auto starts = block_starts(n, k_seq);
  double mass = 0.0;
  for (std::size_t p = 0; p < starts.size(); ++p) {
    const std::uint64_t lo = starts[p];
    std::uint64_t hi = n;
    if (p + 1 < starts.size()) hi = std::min(hi, starts[p + 1] - 1);
    hi = std::min(hi, scaled_floor(t, lo, strict));
    if (hi >= lo) mass += harmonic_range(lo, hi);
  }
  return std::clamp(mass / harmonic(n), 0.0, 1.0);
}

}  // namespace

Mantissa mantissa_psi(std::uint64_t n, const SamplingSequence& k_seq) {
  if (n == 0) throw DomainError("mantissa_psi: n must be >= 1");
  Mantissa m;
  if (k_seq.kind() == SamplingSequence::Kind::power_of_two) {
    m.block = static_cast<std::uint64_t>(std::bit_width(n) - 1);
    m.block_start = std::uint64_t{1} << m.block;
  } else {
    const auto starts = block_starts(n, k_seq);
    m.block = starts.size() - 1;
    m.block_start = starts.back();
  }
  m.t = rounded_ratio(n, m.block_start);
  return m;
}

LogIndexLaw::LogIndexLaw(std::uint64_t horizon) : n_(horizon), d_n_(harmonic(horizon)) {
  if (horizon == 0) throw DomainError("log index law: horizon must be >= 1");
}

double LogIndexLaw::weight(std::uint64_t k) const {
  if (k == 0 || k > n_) return 0.0;
  return 1.0 / (d_n_ * static_cast<double>(k));
}

double LogIndexLaw::cdf(std::uint64_t k) const {
  if (k == 0) return 0.0;
  if (k >= n_) return 1.0;
  return harmonic(k) / d_n_;
}

std::uint64_t LogIndexLaw::sample(Rng& rng) const {
  return harmonic_inverse((1.0 - rng.uniform()) * d_n_, n_);  // target in (0, D_n]
}

std::vector<double> LogIndexLaw::weights() const {
  if (n_ > 100000000ULL) throw DomainError("log index law: too many weights to materialize");
  std::vector<double> w(n_);
  for (std::uint64_t k = 1; k <= n_; ++k) w[k - 1] = weight(k);
  return w;
}

LogIndexLaw log_index_law(std::uint64_t horizon) { return LogIndexLaw(horizon); }

double psi_pushforward_cdf(std::uint64_t n, const SamplingSequence& k_seq, double t) {
  return pushforward(n, k_seq, t, false);
}

double psi_pushforward_cdf_left(std::uint64_t n, const SamplingSequence& k_seq, double t) {
  return pushforward(n, k_seq, t, true);
}

PsiPushforwardLaw::PsiPushforwardLaw(std::uint64_t n, SamplingSequence k_seq)
    : n_(n), k_seq_(k_seq), index_law_(n) {}

double PsiPushforwardLaw::sample(Rng& rng) const {
  return mantissa_psi(index_law_.sample(rng), k_seq_).t;
}

double PsiPushforwardLaw::cdf(double t) const { return psi_pushforward_cdf(n_, k_seq_, t); }

double PsiPushforwardLaw::cdf_left(double t) const {
  return psi_pushforward_cdf_left(n_, k_seq_, t);
}

Support PsiPushforwardLaw::support() const {
  // Rounded block starts can make a block longer than the ratio.
  const auto starts = block_starts(n_, k_seq_);
  double hi = 1.0;
  for (std::size_t p = 0; p < starts.size(); ++p) {
    const std::uint64_t last = p + 1 < starts.size() ? starts[p + 1] - 1 : n_;
    hi = std::max(hi, rounded_ratio(last, starts[p]));
  }
  return {1.0, hi, true};
}

std::string PsiPushforwardLaw::describe() const {
  return "psi(T_n) n=" + std::to_string(n_) + " k=" + k_seq_.name();
}

DyadicLogIndexLaw::DyadicLogIndexLaw(unsigned exponent) : exponent_(exponent) {
  if (exponent > 1000) throw DomainError("dyadic log index law: exponent above 1000");
  if (exponent <= kExactBits) {
    d_n_ = harmonic(std::uint64_t{1} << exponent);
  } else {
    d_n_ = exponent * std::numbers::ln2 + kEulerGamma + std::ldexp(0.5, -static_cast<int>(exponent));
  }
}

DyadicIndex DyadicLogIndexLaw::sample(Rng& rng) const {
  const double target = (1.0 - rng.uniform()) * d_n_;
  const unsigned exact_bits = std::min(exponent_, kExactBits);
  const std::uint64_t exact_cap = std::uint64_t{1} << exact_bits;
  DyadicIndex idx;
  if (exponent_ <= kExactBits || target <= harmonic(exact_cap - 1)) {
    idx.k = harmonic_inverse(target, exponent_ <= kExactBits ? exact_cap : exact_cap - 1);
    idx.block = static_cast<unsigned>(std::bit_width(idx.k) - 1);
    idx.t = std::ldexp(static_cast<double>(idx.k), -static_cast<int>(idx.block));
    return idx;
  }
  // log2 k = (target - gamma) / log 2; the 1/2 shift is below 2^-62.
  const double log2k = (target - kEulerGamma) / std::numbers::ln2;
  idx.k = 0;
  if (log2k >= exponent_) {
    idx.block = exponent_;
    idx.t = 1.0;
    return idx;
  }
  idx.block = std::max(kExactBits, static_cast<unsigned>(std::floor(log2k)));
  idx.t = std::clamp(std::exp2(log2k - idx.block), 1.0, std::nextafter(2.0, 1.0));
  return idx;
}

double DyadicLogIndexLaw::psi_mass(double t, bool strict) const {
  const auto pow2 = SamplingSequence::power_of_two();
  if (exponent_ <= kExactBits) {
    return pushforward(std::uint64_t{1} << exponent_, pow2, t, strict) * d_n_;
  }
  const std::uint64_t full = (std::uint64_t{1} << kExactBits) - 1;
  double mass = pushforward(full, pow2, t, strict) * harmonic(full);
  const double tt = std::min(t, 2.0);
  if (tt > 1.0) mass += (exponent_ - kExactBits) * std::log(tt);
  if (strict ? t > 1.0 : t >= 1.0) mass += std::ldexp(1.0, -static_cast<int>(exponent_));
  return mass;
}

double DyadicLogIndexLaw::psi_cdf(double t) const {
  return std::clamp(psi_mass(t, false) / d_n_, 0.0, 1.0);
}

double DyadicLogIndexLaw::psi_cdf_left(double t) const {
  return std::clamp(psi_mass(t, true) / d_n_, 0.0, 1.0);
}

std::string DyadicPsiLaw::describe() const {
  return "psi(T_n) n=2^" + std::to_string(law_.exponent()) + " k=pow2";
}

PsiDistance psi_sup_distance(std::uint64_t n, const SamplingSequence& k_seq) {
  if (n == 0) throw DomainError("psi_sup_distance: horizon must be >= 1");
  if (n > 20000000ULL) throw DomainError("psi_sup_distance: horizon above 2e7");
  struct Atom {
    std::uint64_t k;
    std::uint64_t start;
  };
  const auto starts = block_starts(n, k_seq);
  std::vector<Atom> atoms;
  atoms.reserve(n);
  for (std::size_t p = 0; p < starts.size(); ++p) {
    const std::uint64_t hi = p + 1 < starts.size() ? std::min(n, starts[p + 1] - 1) : n;
    for (std::uint64_t k = starts[p]; k <= hi; ++k) atoms.push_back({k, starts[p]});
  }
  using u128 = unsigned __int128;
  auto less = [](const Atom& a, const Atom& b) {
    return static_cast<u128>(a.k) * b.start < static_cast<u128>(b.k) * a.start;
  };
  auto same = [](const Atom& a, const Atom& b) {
    return static_cast<u128>(a.k) * b.start == static_cast<u128>(b.k) * a.start;
  };
  std::sort(atoms.begin(), atoms.end(), less);

  const double d_n = harmonic(n);
  const double log_c = std::log(k_seq.ratio());
  PsiDistance out;
  out.atoms = atoms.size();
  double cumulative = 0.0;
  std::size_t i = 0;
  while (i < atoms.size()) {
    const double t = static_cast<double>(atoms[i].k) / static_cast<double>(atoms[i].start);
    const double before = cumulative / d_n;
    std::size_t j = i;
    while (j < atoms.size() && same(atoms[i], atoms[j])) {
      cumulative += 1.0 / static_cast<double>(atoms[j].k);
      ++j;
    }
    const double after = cumulative / d_n;
    const double target = std::log(t) / log_c;
    const double diff = std::max(std::abs(after - target), std::abs(before - target));
    if (diff > out.sup) {
      out.sup = diff;
      out.at = t;
    }
    i = j;
  }
  return out;
}

namespace {

// Exact level splitting of `remaining` summands starting at payoff 2^level;
// returns sum of payoffs / scale.
long double st_petersburg_tail(std::uint64_t remaining, int level, long double scale,
                               Rng& rng) {
  long double sum = 0.0L;
  long double payoff = std::ldexp(1.0L, level);
  while (remaining > 0) {
    const std::uint64_t here = rng.binomial(remaining, 0.5);
    sum += payoff * static_cast<long double>(here) / scale;
    remaining -= here;
    payoff *= 2.0L;
  }
  return sum;
}

}  // namespace

double st_petersburg_statistic(std::uint64_t k, Rng& rng) {
  if (k == 0) throw DomainError("St. Petersburg statistic needs k >= 1");
  const long double kk = static_cast<long double>(k);
  return static_cast<double>(st_petersburg_tail(k, 1, kk, rng) - std::log2(kk));
}

double st_petersburg_statistic(const DyadicIndex& index, Rng& rng) {
  if (index.k != 0) return st_petersburg_statistic(index.k, rng);
  if (!(index.t >= 1.0 && index.t < 2.0)) throw DomainError("dyadic index needs t in [1, 2)");
  const long double scale = std::ldexp(static_cast<long double>(index.t), index.block);
  const long double limit = 0x1.0p62L;
  // r = remaining / k.
  long double r = 1.0L;
  long double sum = 0.0L;
  int level = 1;
  while (r * scale >= limit) {
    const long double mean = r / 2.0L;
    const long double sd = std::sqrt(r / scale) / 2.0L;
    const long double here = std::clamp(mean + sd * static_cast<long double>(rng.normal()),
                                        0.0L, r);
    sum += std::ldexp(here, level);
    r -= here;
    ++level;
  }
  const auto remaining = static_cast<std::uint64_t>(std::llround(r * scale));
  sum += st_petersburg_tail(remaining, level, scale, rng);
  const long double log2k = index.block + std::log2(static_cast<long double>(index.t));
  return static_cast<double>(sum - log2k);
}

SemistableResult run_semistable_demo(const SemistableConfig& cfg, const ReplicationPlan& plan) {
  if (cfg.c != 2.0) {
    throw ConfigError("semistable demo: St. Petersburg summands need c = 2");
  }
  if (cfg.horizon > (std::uint64_t{1} << kExactBits)) {
    throw ConfigError("semistable demo: explicit horizon must be at most 2^62");
  }
  if (cfg.horizon == 0 && cfg.horizon_exponent > 1000) {
    throw ConfigError("semistable demo: horizon exponent above 1000");
  }
  if (cfg.fixed_exponent > 60) throw ConfigError("semistable demo: fixed exponent above 60");
  const auto k_seq = SamplingSequence::power_of_two();
  std::optional<LogIndexLaw> general;
  std::optional<DyadicLogIndexLaw> dyadic;
  if (cfg.horizon > 0) {
    general.emplace(cfg.horizon);
  } else {
    dyadic.emplace(cfg.horizon_exponent);
  }
  const std::uint64_t fixed_index = std::uint64_t{1} << cfg.fixed_exponent;
  const bool degenerate = cfg.index_law == SemistableConfig::IndexLaw::fixed;

  struct Draw {
    double statistic = 0.0;
    double psi = 1.0;
  };
  const auto a = replicate<Draw>(plan, [&](Rng& rng) {
    DyadicIndex idx;
    if (degenerate) {
      idx.k = fixed_index;
    } else if (general) {
      idx.k = general->sample(rng);
    } else {
      idx = dyadic->sample(rng);
    }
    Draw d;
    d.psi = idx.k != 0 ? mantissa_psi(idx.k, k_seq).t : idx.t;
    d.statistic = st_petersburg_statistic(idx, rng);
    return d;
  });

  ReplicationPlan plan_b = plan;
  plan_b.seed.stream_id = plan.seed.stream_id + plan.replicates;
  const LogarithmicLaw rho(cfg.c);
  auto b = replicate<double>(plan_b, [&](Rng& rng) {
    const double t = degenerate ? 1.0 : rho.sample(rng);
    const auto k = static_cast<std::uint64_t>(std::ldexp(t, static_cast<int>(cfg.fixed_exponent)));
    return st_petersburg_statistic(std::max<std::uint64_t>(k, 1), rng);
  });

  std::vector<double> stat_a;
  std::vector<double> psi;
  stat_a.reserve(a.size());
  psi.reserve(a.size());
  for (const auto& d : a) {
    stat_a.push_back(d.statistic);
    psi.push_back(d.psi);
  }
  return SemistableResult{EmpiricalDistribution(std::move(stat_a)),
                          EmpiricalDistribution(std::move(b)),
                          EmpiricalDistribution(std::move(psi))};
}

}  // namespace transferlab
