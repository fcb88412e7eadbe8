// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "distributions.hpp"
#include "index_control.hpp"
#include "mc_engine.hpp"

namespace transferlab {

/// Position of n inside its block: n = block_start * t with
/// k_block <= n < k_{block+1} and block_start = k_block.
struct Mantissa {
  double t = 1.0;
  std::uint64_t block = 0;
  std::uint64_t block_start = 1;
};

Mantissa mantissa_psi(std::uint64_t n, const SamplingSequence& k_seq);

/// P{T_n = k} = 1/(D_n k) on {1..n}, D_n the n-th harmonic number.
class LogIndexLaw {
 public:
  explicit LogIndexLaw(std::uint64_t horizon);

  std::uint64_t horizon() const noexcept { return n_; }
  double normalizer() const noexcept { return d_n_; }
  double weight(std::uint64_t k) const;
  /// P{T_n <= k}.
  double cdf(std::uint64_t k) const;
  /// Inversion sampling (see harmonic_inverse).
  std::uint64_t sample(Rng& rng) const;
  /// All n weights; refuses horizons above 10^8.
  std::vector<double> weights() const;

 private:
  std::uint64_t n_;
  double d_n_;
};

LogIndexLaw log_index_law(std::uint64_t horizon);

/// Exact P(psi(T_n) <= t) for T_n ~ log_index_law(n), by block sums.
double psi_pushforward_cdf(std::uint64_t n, const SamplingSequence& k_seq, double t);
/// Exact P(psi(T_n) < t).
double psi_pushforward_cdf_left(std::uint64_t n, const SamplingSequence& k_seq, double t);

/// The law of psi(T_n) as a Distribution on [1, c).
class PsiPushforwardLaw final : public Distribution {
 public:
  PsiPushforwardLaw(std::uint64_t n, SamplingSequence k_seq);
  double sample(Rng& rng) const override;
  double cdf(double t) const override;
  double cdf_left(double t) const override;
  Support support() const override;
  std::string describe() const override;

 private:
  std::uint64_t n_;
  SamplingSequence k_seq_;
  LogIndexLaw index_law_;
};

/// An index k = 2^block * t of the dyadic blocks. `k` is exact when it fits
/// in 62 bits and 0 otherwise.
struct DyadicIndex {
  std::uint64_t k = 1;
  unsigned block = 0;
  double t = 1.0;
};

/// The logarithmic index law on {1, ..., 2^exponent}, exponent <= 1000.
/// Indices below 2^62 are drawn as exact integers; above, only (block, t)
/// is drawn, from the continuous inversion of H_k ~ log(k + 1/2) + gamma
/// (relative error below 2^-60 in k).
class DyadicLogIndexLaw {
 public:
  explicit DyadicLogIndexLaw(unsigned exponent);
  unsigned exponent() const noexcept { return exponent_; }
  double normalizer() const noexcept { return d_n_; }
  DyadicIndex sample(Rng& rng) const;
  /// P(psi(T) <= t) and P(psi(T) < t). Blocks at and above 2^62 are
  /// summed in closed form, log t each up to O(2^-62).
  double psi_cdf(double t) const;
  double psi_cdf_left(double t) const;

 private:
  double psi_mass(double t, bool strict) const;
  unsigned exponent_;
  double d_n_;
};

/// psi(T) for T ~ DyadicLogIndexLaw as a Distribution on [1, 2).
class DyadicPsiLaw final : public Distribution {
 public:
  explicit DyadicPsiLaw(unsigned exponent) : law_(exponent) {}
  double sample(Rng& rng) const override { return law_.sample(rng).t; }
  double cdf(double t) const override { return law_.psi_cdf(t); }
  double cdf_left(double t) const override { return law_.psi_cdf_left(t); }
  Support support() const override { return {1.0, 2.0, true}; }
  std::string describe() const override;

 private:
  DyadicLogIndexLaw law_;
};

struct PsiDistance {
  double sup = 0.0;
  double at = 1.0;  // location of the supremum
  std::size_t atoms = 0;
};

/// sup_t |P(psi(T_n) <= t) - log t / log c| computed over every atom of the
/// finite-n law (sorted exactly as rationals k/k_p). Horizon capped at 2e7.
PsiDistance psi_sup_distance(std::uint64_t n, const SamplingSequence& k_seq);

/// S_k/k - log2(k) for k St. Petersburg payoffs P(X = 2^j) = 2^-j. The
/// payoff counts per level are drawn as successive Binomial(remaining, 1/2),
/// which is exact and costs O(log k).
double st_petersburg_statistic(std::uint64_t k, Rng& rng);

/// The same statistic at k = 2^block * t for any block. While more than 2^62
/// summands remain, the level count is drawn from the normal law with the
/// binomial's mean and variance (those levels move the statistic by less
/// than 2^-30 in total); the tail levels are exact as above.
double st_petersburg_statistic(const DyadicIndex& index, Rng& rng);

struct SemistableConfig {
  enum class IndexLaw { logarithmic, fixed };
  double c = 2.0;
  /// T_n ranges over {1, ..., 2^horizon_exponent} ...
  unsigned horizon_exponent = 256;
  /// ... or over {1, ..., horizon} when horizon > 0 (at most 2^62).
  std::uint64_t horizon = 0;
  /// B draws at index floor(2^fixed_exponent * t), t ~ logarithmic law.
  unsigned fixed_exponent = 40;
  IndexLaw index_law = IndexLaw::logarithmic;
};

struct SemistableResult {
  /// (A) the statistic at the random index T_n.
  EmpiricalDistribution random_index;
  /// (B) the rho-mixture of fixed-index laws.
  EmpiricalDistribution mixture_of_subsequences;
  /// psi(T_n) recorded alongside (A).
  EmpiricalDistribution psi_marginal;
};

/// `plan` seeds (A); (B) uses the streams right after it.
SemistableResult run_semistable_demo(const SemistableConfig& cfg, const ReplicationPlan& plan);

}  // namespace transferlab
