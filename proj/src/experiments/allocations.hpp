// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "distributions.hpp"
#include "index_control.hpp"
#include "mc_engine.hpp"

namespace transferlab {

/// Exact E[mu_r(n, N)] for n balls in N equiprobable boxes.
double alloc_exact_mean(unsigned r, std::uint64_t n, std::uint64_t N);
/// Exact Var[mu_r(n, N)] from the indicator decomposition
/// Var = E + N(N-1) q_r - E^2, with the pair term taken relative to E^2 in
/// log space.
double alloc_exact_var(unsigned r, std::uint64_t n, std::uint64_t N);

/// Number of boxes holding exactly r balls after throwing n balls.
std::uint64_t simulate_occupancy(unsigned r, std::uint64_t n, std::uint64_t N, Rng& rng);

enum class AllocationPath { central, sparse, dense };

AllocationPath parse_allocation_path(std::string_view text);
std::string to_string(AllocationPath path);

/// A deterministic (balls, boxes) point on a canonical path together with the
/// exact regime point it approaches.
struct AllocationIndex {
  std::uint64_t balls = 1;
  std::uint64_t boxes = 1;
  RegimePoint limit;
  AllocationPath path = AllocationPath::central;
};

/// Canonical index for level r on `path` with N boxes:
///   central: n = N, limit (0, 0).
///   sparse:  r = 0: n = round(sqrt(2 N lambda)), limit (1/lambda, 0);
///            r >= 2: n on the rising branch with E mu_r closest to lambda,
///            limit (0, 1/lambda); r = 1 has no sparse Poisson regime.
///   dense:   n on the falling branch (n >= max(r, 1) N) with E mu_r closest
///            to lambda, limit (0, 1/lambda).
AllocationIndex canonical_path(unsigned r, AllocationPath path, std::uint64_t boxes,
                               double lambda);

struct AllocationConfig {
  struct Choice {
    AllocationIndex index;
    double weight = 1.0;
  };
  unsigned r = 0;
  /// Law of the random index (T_n, U_N); one entry means a deterministic path.
  std::vector<Choice> index_law;
};

struct AllocationResult {
  /// Standardized counts mu_r*, replicate order.
  std::vector<double> values;
  /// Half the lattice spacing of each value, 0.5 / sd of its index.
  std::vector<double> half_widths;
  EmpiricalDistribution empirical;
  std::shared_ptr<const Distribution> target;
  std::vector<double> means;
  std::vector<double> variances;
};

AllocationResult run_allocations(const AllocationConfig& cfg, const ReplicationPlan& plan);

}  // namespace transferlab
