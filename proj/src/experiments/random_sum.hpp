// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "distributions.hpp"
#include "experiments/transfer_result.hpp"
#include "index_control.hpp"
#include "mc_engine.hpp"

namespace transferlab {

/// Gaussian triangular array X_{n,k} = xi_k / sqrt(|k_n|) over k in N^d.
struct RandomSumConfig {
  std::vector<SamplingSequence> k_seq{SamplingSequence::power_of_two()};
  std::uint64_t stage = 14;
  MixingLaw mixing = MixingLaw::point({1.0});
  /// Refuse configurations where one replicate would sum more terms.
  std::uint64_t max_terms = std::uint64_t{1} << 26;
};

/// Random index T_n = max(1, floor(k_n t)) with t ~ rho, one per coordinate.
MultiIndex random_sum_index(const RandomSumConfig& cfg, std::span<const double> t);

/// Y_{n, T_n} = sum_{k <= T_n} X_{n,k}; target is the mixture of
/// N(0, |t|) over rho.
TransferResult run_random_sum(const RandomSumConfig& cfg, const ReplicationPlan& plan);

}  // namespace transferlab
