// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "distributions.hpp"
#include "experiments/transfer_result.hpp"
#include "mc_engine.hpp"

namespace transferlab {

/// Gaussian moving-difference field X_k = eps_k - a * eps_{k+e_1} on N^d.
/// Nonpositive correlations make it negatively associated; the covariance
/// series sums to sigma^2 = (1 - a)^2.
struct NAFieldConfig {
  double a = 0.5;
  std::vector<std::uint64_t> n{10000};
  MixingLaw mixing = MixingLaw::point({1.0});
  /// Sites of the largest lattice a replicate may need, floor(n t_max) + e_1.
  std::uint64_t max_sites = std::uint64_t{1} << 25;
  /// Side length of the lattice used for the covariance diagnostic.
  std::uint64_t diagnostic_sites = 1000000;
};

struct FieldCovariance {
  double variance = 0.0;  // lag 0
  double lag1 = 0.0;      // lag e_1
  double lag2 = 0.0;      // lag 2 e_1
  std::optional<double> cross;  // lag e_2 when d >= 2
};

struct NAFieldResult {
  TransferResult transfer;
  double sigma2 = 0.0;
  FieldCovariance covariance;
  /// Exact finite-n law when rho is a point mass.
  std::optional<Normal> finite_n;
};

/// Var of sum_{k <= N} X_k for the moving-difference field, by telescoping
/// each e_1-row: 1 + a^2 + (1-a)^2 (N_1 - 1) per row.
double na_partial_sum_variance(double a, std::span<const std::uint64_t> N);

/// Covariances of one simulated field with about `sites` sites.
FieldCovariance na_field_covariance(double a, std::size_t dim, std::uint64_t sites, Rng& rng);

/// (1/sqrt(|n|)) sum_{k <= floor(n T)} X_k with T ~ rho; target is the
/// mixture of N(0, (1-a)^2 |t|) over rho.
NAFieldResult run_na_field(const NAFieldConfig& cfg, const ReplicationPlan& plan);

}  // namespace transferlab
