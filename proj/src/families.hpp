// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "distributions.hpp"

namespace transferlab {

/// t -> N(0, sigma2 * |t|) with |t| the product of the coordinates. The
/// value at |t| = 0 is the point mass at 0, so the family is weakly
/// continuous on [0, inf)^d.
class GaussianScaleFamily final : public LimitFamily {
 public:
  GaussianScaleFamily(std::size_t dimension, double sigma2);
  std::size_t dimension() const override { return dim_; }
  double sigma2() const noexcept { return sigma2_; }
  DistributionPtr at(std::span<const double> t) const override;
  double cdf(std::span<const double> t, double x) const override;
  double cdf_left(std::span<const double> t, double x) const override;
  double sample(std::span<const double> t, Rng& rng) const override;
  std::optional<double> cdf_uniform_last(std::span<const double> head, double lo, double hi,
                                         double x) const override;
  std::string describe() const override;

  double variance_at(std::span<const double> t) const;

 private:
  std::size_t dim_;
  double sigma2_;
};

/// t -> standardized Poisson with lambda = 1/t, and N(0,1) at t = 0.
class StdPoissonFamily final : public LimitFamily {
 public:
  std::size_t dimension() const override { return 1; }
  DistributionPtr at(std::span<const double> t) const override;
  std::string describe() const override { return "t->PoissonStd(1/t)"; }
};

/// Same law for every t.
class ConstantFamily final : public LimitFamily {
 public:
  ConstantFamily(std::size_t dimension, DistributionPtr law)
      : dim_(dimension), law_(std::move(law)) {}
  std::size_t dimension() const override { return dim_; }
  DistributionPtr at(std::span<const double>) const override { return law_; }
  std::string describe() const override { return "const " + law_->describe(); }

 private:
  std::size_t dim_;
  DistributionPtr law_;
};

/// (g, d) -> nu_{g,d} for occupancy level r: N(0,1) or a standardized
/// Poisson as given by classify_regime. Points outside Delta_r throw.
class AllocationRegimeFamily final : public LimitFamily {
 public:
  explicit AllocationRegimeFamily(unsigned r) : r_(r) {}
  std::size_t dimension() const override { return 2; }
  DistributionPtr at(std::span<const double> t) const override;
  std::string describe() const override;

 private:
  unsigned r_;
};

}  // namespace transferlab
