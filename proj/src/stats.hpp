// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "distributions.hpp"

namespace transferlab {

struct GofReport {
  std::string statistic;
  double value = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;  // second sample size, 0 for one-sample tests
  double critical = 0.0;
  double alpha = 0.0;
  bool pass = false;
};

/// One row of an ECDF comparison table.
struct EcdfRow {
  double x;
  double f_empirical;
  double f_target;
  double abs_diff;
};

/// Asymptotic Kolmogorov coefficient c(alpha) = sqrt(-log(alpha/2)/2),
/// with the tabulated c(0.01) = 1.628 and c(0.05) = 1.358.
double ks_coefficient(double alpha);

/// sup_x |F_emp(x) - F(x)|, exact for any right-continuous target: both
/// one-sided limits are compared at every sample point.
double ks_distance(const EmpiricalDistribution& emp, const Distribution& target,
                   std::vector<EcdfRow>* table = nullptr);

GofReport ks_one_sample(const EmpiricalDistribution& emp, const Distribution& target,
                        double alpha, std::vector<EcdfRow>* table = nullptr);

/// KS for lattice-valued statistics. Sample i lives on its own lattice with
/// half-spacing half_widths[i] (0 = continuous value). The distance is taken
/// over cell boundaries x_i +- h_i instead of the sample points, and every
/// target atom a is surrounded by an excluded window of a quarter of the
/// neighbouring atom spacing whose edges are evaluated instead. Reduces to
/// ks_distance when all h_i = 0 and the target has no atoms.
double ks_lattice_distance(std::span<const double> values, std::span<const double> half_widths,
                           const Distribution& target, std::vector<EcdfRow>* table = nullptr);

GofReport ks_one_sample_lattice(std::span<const double> values,
                                std::span<const double> half_widths,
                                const Distribution& target, double alpha,
                                std::vector<EcdfRow>* table = nullptr);

double ks_two_sample_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                              std::vector<EcdfRow>* table = nullptr);

GofReport ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                        double alpha, std::vector<EcdfRow>* table = nullptr);

/// Integral of |F_a - F_b| over the real line.
double wasserstein1(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

}  // namespace transferlab
