// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rng.hpp"

namespace transferlab {

struct Support {
  double lo;
  double hi;
  bool lattice;
};

/// A probability law on the real line. Implementations are immutable; the
/// random source is always passed in.
class Distribution {
 public:
  virtual ~Distribution() = default;

  virtual double sample(Rng& rng) const = 0;
  /// P(X <= x), right-continuous.
  virtual double cdf(double x) const = 0;
  /// P(X < x). Equal to cdf for laws without atoms.
  virtual double cdf_left(double x) const { return cdf(x); }
  virtual Support support() const = 0;
  /// Atom locations in [lo, hi], ascending. Empty for continuous laws.
  virtual std::vector<double> atoms(double /*lo*/, double /*hi*/) const { return {}; }
  virtual std::string describe() const = 0;
};

using DistributionPtr = std::shared_ptr<const Distribution>;

double normal_cdf(double z);

class Normal final : public Distribution {
 public:
  /// variance == 0 gives the point mass at `mean`.
  Normal(double mean, double variance);
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }

  double sample(Rng& rng) const override;
  double cdf(double x) const override;
  double cdf_left(double x) const override;
  Support support() const override;
  std::vector<double> atoms(double lo, double hi) const override;
  std::string describe() const override;

 private:
  double mean_;
  double variance_;
  double sd_;
};

class PointMass final : public Distribution {
 public:
  explicit PointMass(double at) : at_(at) {}
  double sample(Rng&) const override { return at_; }
  double cdf(double x) const override { return x >= at_ ? 1.0 : 0.0; }
  double cdf_left(double x) const override { return x > at_ ? 1.0 : 0.0; }
  Support support() const override { return {at_, at_, true}; }
  std::vector<double> atoms(double lo, double hi) const override;
  std::string describe() const override;

 private:
  double at_;
};

class Uniform final : public Distribution {
 public:
  Uniform(double lo, double hi);
  double sample(Rng& rng) const override;
  double cdf(double x) const override;
  Support support() const override { return {lo_, hi_, false}; }
  std::string describe() const override;

 private:
  double lo_;
  double hi_;
};

/// Law of (P - lambda)/sqrt(lambda) for P ~ Poisson(lambda).
class StandardizedPoisson final : public Distribution {
 public:
  explicit StandardizedPoisson(double lambda);
  double lambda() const noexcept { return lambda_; }

  double sample(Rng& rng) const override;
  double cdf(double x) const override;
  double cdf_left(double x) const override;
  Support support() const override;
  std::vector<double> atoms(double lo, double hi) const override;
  std::string describe() const override;

  /// Lattice point (k - lambda)/sqrt(lambda).
  double lattice_point(std::uint64_t k) const;
  double pmf(std::uint64_t k) const;

 private:
  double lambda_;
  double root_;
};

/// Density (t log c)^{-1} on [1, c].
class LogarithmicLaw final : public Distribution {
 public:
  explicit LogarithmicLaw(double c);
  double c() const noexcept { return c_; }

  double sample(Rng& rng) const override;
  double cdf(double t) const override;
  Support support() const override { return {1.0, c_, false}; }
  std::string describe() const override;

 private:
  double c_;
  double log_c_;
};

/// CDF of the standardized Poisson law; throws DomainError for lambda <= 0.
double std_poisson_cdf(double lambda, double x);
/// CDF of the logarithmic law on [1, c]; throws DomainError for c <= 1.
double log_law_cdf(double c, double t);

/// Sorted sample. cdf(x) = #{values <= x} / n.
class EmpiricalDistribution final : public Distribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::span<const double> values() const noexcept { return values_; }

  double sample(Rng& rng) const override;
  double cdf(double x) const override;
  double cdf_left(double x) const override;
  Support support() const override;
  std::vector<double> atoms(double lo, double hi) const override;
  std::string describe() const override;

  /// Lower quantile: smallest sample value v with cdf(v) >= p, p in (0, 1].
  double quantile(double p) const;
  double mean() const;
  double variance() const;

 private:
  std::vector<double> values_;
};

/// t -> mu_t. The parameter t lives in R^dimension().
class LimitFamily {
 public:
  virtual ~LimitFamily() = default;
  virtual std::size_t dimension() const = 0;
  virtual DistributionPtr at(std::span<const double> t) const = 0;
  virtual double cdf(std::span<const double> t, double x) const { return at(t)->cdf(x); }
  virtual double cdf_left(std::span<const double> t, double x) const {
    return at(t)->cdf_left(x);
  }
  virtual double sample(std::span<const double> t, Rng& rng) const {
    return at(t)->sample(rng);
  }
  /// Mean of cdf(t, x) over a last coordinate uniform on [lo, hi], the other
  /// coordinates fixed to `head`. Empty when no closed form is available.
  virtual std::optional<double> cdf_uniform_last(std::span<const double> /*head*/,
                                                 double /*lo*/, double /*hi*/,
                                                 double /*x*/) const {
    return std::nullopt;
  }
  virtual std::string describe() const = 0;
};

using LimitFamilyPtr = std::shared_ptr<const LimitFamily>;

/// The mixing law rho: either finitely many weighted atoms or a density on a
/// box together with a sampler.
class MixingLaw {
 public:
  struct Atom {
    std::vector<double> t;
    double weight;
  };
  using Density = std::function<double(std::span<const double>)>;
  using Sampler = std::function<std::vector<double>(Rng&)>;

  static MixingLaw point(std::vector<double> t);
  /// Weights must be positive and sum to 1 within 1e-12.
  static MixingLaw discrete(std::vector<Atom> atoms);
  static MixingLaw uniform_box(std::vector<double> lo, std::vector<double> hi);
  /// Logarithmic law on [1, c] (one-dimensional).
  static MixingLaw logarithmic(double c);
  /// Density on [lo, hi]; its integral must be 1 within 1e-6.
  static MixingLaw continuous(std::vector<double> lo, std::vector<double> hi,
                              Density density, Sampler sampler, std::string name);

  /// "point:t1[,t2..]", "uniform:a,b", "log:c", "discrete:t@w;t@w" where
  /// each t is a comma list. `dim` fixes the dimension of uniform boxes.
  static MixingLaw parse(std::string_view spec, std::size_t dim);

  bool is_discrete() const noexcept { return discrete_; }
  bool is_uniform_box() const noexcept { return uniform_; }
  std::size_t dimension() const noexcept { return dim_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::span<const double> lower() const noexcept { return lo_; }
  std::span<const double> upper() const noexcept { return hi_; }

  std::vector<double> sample(Rng& rng) const;
  /// Integral of f against rho. Discrete: exact weighted sum. Continuous:
  /// iterated adaptive Simpson to absolute tolerance `tol`.
  double expectation(const std::function<double(std::span<const double>)>& f,
                     double tol = 1e-8) const;
  std::string describe() const { return name_; }

 private:
  MixingLaw() = default;
  bool discrete_ = true;
  bool uniform_ = false;
  std::size_t dim_ = 0;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
  std::vector<double> lo_, hi_;
  Density density_;
  Sampler sampler_;
  std::string name_;
};

/// The mixture law integral of mu_t d rho(t).
class MixtureLaw final : public Distribution {
 public:
  MixtureLaw(LimitFamilyPtr family, MixingLaw mixing);

  const LimitFamily& family() const noexcept { return *family_; }
  const MixingLaw& mixing() const noexcept { return mixing_; }

  /// Two-stage draw: t ~ rho, then x ~ mu_t.
  double sample(Rng& rng) const override;
  double cdf(double x) const override;
  double cdf_left(double x) const override;
  Support support() const override;
  std::vector<double> atoms(double lo, double hi) const override;
  std::string describe() const override;

 private:
  LimitFamilyPtr family_;
  MixingLaw mixing_;
};

/// F(x) of the mixture; quadrature failures surface as QuadratureError.
double mixture_cdf(const MixtureLaw& m, double x);
double mixture_sample(const MixtureLaw& m, Rng& rng);

}  // namespace transferlab
