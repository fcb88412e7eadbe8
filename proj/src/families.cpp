// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include "families.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "errors.hpp"
#include "index_control.hpp"

namespace transferlab {

GaussianScaleFamily::GaussianScaleFamily(std::size_t dimension, double sigma2)
    : dim_(dimension), sigma2_(sigma2) {
  if (dimension == 0) throw DomainError("Gaussian family: dimension must be >= 1");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw DomainError("Gaussian family: sigma^2 must be positive");
  }
}

double GaussianScaleFamily::variance_at(std::span<const double> t) const {
  if (t.size() != dim_) throw DomainError("Gaussian family: wrong parameter dimension");
  double v = sigma2_;
  for (double ti : t) v *= std::abs(ti);
  return v;
}

DistributionPtr GaussianScaleFamily::at(std::span<const double> t) const {
  return std::make_shared<Normal>(0.0, variance_at(t));
}

double GaussianScaleFamily::cdf(std::span<const double> t, double x) const {
  const double v = variance_at(t);
  if (v == 0.0) return x >= 0.0 ? 1.0 : 0.0;
  return normal_cdf(x / std::sqrt(v));
}

double GaussianScaleFamily::cdf_left(std::span<const double> t, double x) const {
  const double v = variance_at(t);
  if (v == 0.0) return x > 0.0 ? 1.0 : 0.0;
  return normal_cdf(x / std::sqrt(v));
}

double GaussianScaleFamily::sample(std::span<const double> t, Rng& rng) const {
  const double v = variance_at(t);
  if (v == 0.0) return 0.0;
  return std::sqrt(v) * rng.normal();
}

// With v = sigma2 |head| s and a = |x| / sqrt(sigma2 |head|),
// G(s) = (s + a^2) Phi(-a/sqrt s) - a sqrt(s) phi(a/sqrt s) is an
// antiderivative of Phi(-a/sqrt s) with G(0) = 0.
std::optional<double> GaussianScaleFamily::cdf_uniform_last(std::span<const double> head,
                                                            double lo, double hi,
                                                            double x) const {
  if (head.size() + 1 != dim_ || lo < 0.0 || !(hi > lo)) return std::nullopt;
  double p = sigma2_;
  for (double h : head) p *= std::abs(h);
  if (p == 0.0) return x >= 0.0 ? 1.0 : 0.0;
  if (x == 0.0) return 0.5;
  const double a = std::abs(x) / std::sqrt(p);
  auto G = [a](double s) {
    if (s == 0.0) return 0.0;
    const double w = a / std::sqrt(s);
    const double lower = 0.5 * std::erfc(w / std::numbers::sqrt2);
    const double density = std::exp(-0.5 * w * w) / std::sqrt(2.0 * std::numbers::pi);
    return (s + a * a) * lower - a * std::sqrt(s) * density;
  };
  const double below = (G(hi) - G(lo)) / (hi - lo);
  return x < 0.0 ? below : 1.0 - below;
}

std::string GaussianScaleFamily::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << "t->N(0," << sigma2_ << "|t|)";
  return os.str();
}

DistributionPtr StdPoissonFamily::at(std::span<const double> t) const {
  if (t.size() != 1 || !(t[0] >= 0.0) || !std::isfinite(t[0])) {
    throw DomainError("Poisson family: parameter must be a finite t >= 0");
  }
  if (t[0] == 0.0) return std::make_shared<Normal>(0.0, 1.0);
  return std::make_shared<StandardizedPoisson>(1.0 / t[0]);
}

DistributionPtr AllocationRegimeFamily::at(std::span<const double> t) const {
  if (t.size() != 2) throw DomainError("allocation family: parameter must be (g, d)");
  const auto tag = classify_regime(r_, RegimePoint{t[0], t[1], false});
  switch (tag.kind) {
    case LimitTag::Kind::normal: return std::make_shared<Normal>(0.0, 1.0);
    case LimitTag::Kind::poisson_std: return std::make_shared<StandardizedPoisson>(tag.lambda);
    case LimitTag::Kind::undefined: break;
  }
  std::ostringstream os;
  os << "allocation family r=" << r_ << ": (" << t[0] << "," << t[1] << ") is not in Delta";
  throw DomainError(os.str());
}

std::string AllocationRegimeFamily::describe() const {
  return "(g,d)->nu_{g,d} r=" + std::to_string(r_);
}

}  // namespace transferlab
