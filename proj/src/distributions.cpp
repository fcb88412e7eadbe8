// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include "distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "errors.hpp"
#include "quadrature.hpp"

namespace transferlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string fmt(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out;
}

// P(Poisson(lambda) <= k).
double poisson_cdf(double lambda, double k) {
  if (k < 0.0) return 0.0;
  return boost::math::gamma_q(k + 1.0, lambda);
}

// Offset below which a recomputed lattice coordinate is snapped to the
// nearest integer; absorbs the round trip (k - lambda)/sqrt(lambda) -> k.
double lattice_slack(double kf) { return 1e-9 * std::max(1.0, std::abs(kf)); }

std::vector<double> split_numbers(std::string_view text, char sep) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(sep, start);
    if (end == std::string_view::npos) end = text.size();
    const std::string piece(text.substr(start, end - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(piece, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (piece.empty() || used != piece.size()) {
      throw ConfigError("malformed number '" + piece + "' in '" + std::string(text) + "'");
    }
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

// ---------------------------------------------------------------------------

Normal::Normal(double mean, double variance)
    : mean_(mean), variance_(variance), sd_(std::sqrt(variance)) {
  if (!std::isfinite(mean) || !(variance >= 0.0) || !std::isfinite(variance)) {
    throw DomainError("Normal: need finite mean and variance >= 0");
  }
}

double Normal::sample(Rng& rng) const {
  if (sd_ == 0.0) return mean_;
  return mean_ + sd_ * rng.normal();
}

double Normal::cdf(double x) const {
  if (sd_ == 0.0) return x >= mean_ ? 1.0 : 0.0;
  return normal_cdf((x - mean_) / sd_);
}

double Normal::cdf_left(double x) const {
  if (sd_ == 0.0) return x > mean_ ? 1.0 : 0.0;
  return cdf(x);
}

Support Normal::support() const {
  if (sd_ == 0.0) return {mean_, mean_, true};
  return {-kInf, kInf, false};
}

std::vector<double> Normal::atoms(double lo, double hi) const {
  if (sd_ == 0.0 && mean_ >= lo && mean_ <= hi) return {mean_};
  return {};
}

std::string Normal::describe() const { return "N(" + fmt(mean_) + "," + fmt(variance_) + ")"; }

std::vector<double> PointMass::atoms(double lo, double hi) const {
  if (at_ >= lo && at_ <= hi) return {at_};
  return {};
}

std::string PointMass::describe() const { return "delta(" + fmt(at_) + ")"; }

Uniform::Uniform(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("Uniform: need finite lo < hi");
  }
}

double Uniform::sample(Rng& rng) const { return lo_ + (hi_ - lo_) * rng.uniform(); }

double Uniform::cdf(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  return (x - lo_) / (hi_ - lo_);
}

std::string Uniform::describe() const { return "U[" + fmt(lo_) + "," + fmt(hi_) + "]"; }

// ---------------------------------------------------------------------------

StandardizedPoisson::StandardizedPoisson(double lambda)
    : lambda_(lambda), root_(std::sqrt(lambda)) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("standardized Poisson: lambda must be positive and finite");
  }
}

double StandardizedPoisson::sample(Rng& rng) const {
  return (static_cast<double>(rng.poisson(lambda_)) - lambda_) / root_;
}

double StandardizedPoisson::lattice_point(std::uint64_t k) const {
  return (static_cast<double>(k) - lambda_) / root_;
}

double StandardizedPoisson::pmf(std::uint64_t k) const {
  const double kk = static_cast<double>(k);
  return std::exp(kk * std::log(lambda_) - lambda_ - std::lgamma(kk + 1.0));
}

double StandardizedPoisson::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("standardized Poisson cdf at NaN");
  if (x == kInf) return 1.0;
  const double kf = lambda_ + x * root_;
  return poisson_cdf(lambda_, std::floor(kf + lattice_slack(kf)));
}

double StandardizedPoisson::cdf_left(double x) const {
  if (std::isnan(x)) throw DomainError("standardized Poisson cdf at NaN");
  if (x == kInf) return 1.0;
  const double kf = lambda_ + x * root_;
  return poisson_cdf(lambda_, std::ceil(kf - lattice_slack(kf)) - 1.0);
}

Support StandardizedPoisson::support() const { return {-root_, kInf, true}; }

std::vector<double> StandardizedPoisson::atoms(double lo, double hi) const {
  std::vector<double> out;
  const double first = std::max(0.0, std::ceil(lambda_ + lo * root_ - lattice_slack(lambda_)));
  const double last = lambda_ + std::min(hi, 1e12) * root_;
  for (double k = first; k <= last + lattice_slack(last) && out.size() < 1000000; k += 1.0) {
    out.push_back((k - lambda_) / root_);
  }
  return out;
}

std::string StandardizedPoisson::describe() const { return "PoissonStd(" + fmt(lambda_) + ")"; }

double std_poisson_cdf(double lambda, double x) { return StandardizedPoisson(lambda).cdf(x); }

// ---------------------------------------------------------------------------

LogarithmicLaw::LogarithmicLaw(double c) : c_(c), log_c_(std::log(c)) {
  if (!(c > 1.0) || !std::isfinite(c)) throw DomainError("logarithmic law: need c > 1");
}

double LogarithmicLaw::sample(Rng& rng) const { return std::exp(log_c_ * rng.uniform()); }

double LogarithmicLaw::cdf(double t) const {
  if (t < 1.0) return 0.0;
  if (t >= c_) return 1.0;
  return std::log(t) / log_c_;
}

std::string LogarithmicLaw::describe() const { return "LogLaw(" + fmt(c_) + ")"; }

double log_law_cdf(double c, double t) { return LogarithmicLaw(c).cdf(t); }

// ---------------------------------------------------------------------------

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values)
    : values_(std::move(values)) {
  for (double v : values_) {
    if (std::isnan(v)) throw DomainError("empirical distribution: NaN sample value");
  }
  std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::sample(Rng& rng) const {
  if (values_.empty()) throw DomainError("empirical distribution is empty");
  return values_[rng.index(values_.size())];
}

double EmpiricalDistribution::cdf(double x) const {
  if (values_.empty()) throw DomainError("empirical distribution is empty");
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalDistribution::cdf_left(double x) const {
  if (values_.empty()) throw DomainError("empirical distribution is empty");
  const auto it = std::lower_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

Support EmpiricalDistribution::support() const {
  if (values_.empty()) return {0.0, 0.0, true};
  return {values_.front(), values_.back(), true};
}

std::vector<double> EmpiricalDistribution::atoms(double lo, double hi) const {
  std::vector<double> out;
  auto it = std::lower_bound(values_.begin(), values_.end(), lo);
  for (; it != values_.end() && *it <= hi; ++it) {
    if (out.empty() || out.back() != *it) out.push_back(*it);
  }
  return out;
}

std::string EmpiricalDistribution::describe() const {
  return "Empirical(n=" + std::to_string(values_.size()) + ")";
}

double EmpiricalDistribution::quantile(double p) const {
  if (values_.empty()) throw DomainError("empirical distribution is empty");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("quantile level must be in (0, 1]");
  const auto n = static_cast<double>(values_.size());
  auto idx = static_cast<std::size_t>(std::ceil(p * n));
  idx = std::clamp<std::size_t>(idx, 1, values_.size());
  return values_[idx - 1];
}

double EmpiricalDistribution::mean() const {
  if (values_.empty()) throw DomainError("empirical distribution is empty");
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double EmpiricalDistribution::variance() const {
  if (values_.size() < 2) throw DomainError("variance needs two samples");
  const double m = mean();
  double s = 0.0;
  for (double v : values_) s += (v - m) * (v - m);
  return s / static_cast<double>(values_.size() - 1);
}

// ---------------------------------------------------------------------------

MixingLaw MixingLaw::point(std::vector<double> t) {
  if (t.empty()) throw DomainError("mixing point needs a coordinate");
  return discrete({Atom{std::move(t), 1.0}});
}

MixingLaw MixingLaw::discrete(std::vector<Atom> atoms) {
  if (atoms.empty()) throw DomainError("discrete mixing law needs atoms");
  MixingLaw law;
  law.discrete_ = true;
  law.dim_ = atoms.front().t.size();
  double total = 0.0;
  std::ostringstream name;
  name << "discrete:";
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& a = atoms[i];
    if (a.t.size() != law.dim_ || law.dim_ == 0) {
      throw DomainError("discrete mixing law: atoms of different dimension");
    }
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw DomainError("discrete mixing law: weights must be positive");
    }
    for (double v : a.t) {
      if (!std::isfinite(v)) throw DomainError("discrete mixing law: non-finite atom");
    }
    total += a.weight;
    law.cumulative_.push_back(total);
    name << (i ? ";" : "") << fmt(a.t) << "@" << fmt(a.weight);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("discrete mixing law: weights sum to " + fmt(total) + ", not 1");
  }
  law.atoms_ = std::move(atoms);
  law.name_ = law.atoms_.size() == 1 ? "point:" + fmt(law.atoms_[0].t) : name.str();
  return law;
}

MixingLaw MixingLaw::continuous(std::vector<double> lo, std::vector<double> hi,
                                Density density, Sampler sampler, std::string name) {
  if (lo.empty() || lo.size() != hi.size()) throw DomainError("continuous mixing: bad box");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(hi[i] > lo[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
      throw DomainError("continuous mixing: need finite lo < hi");
    }
  }
  const double mass = integrate_box(density, lo, hi, 1e-9);
  if (std::abs(mass - 1.0) > 1e-6) {
    throw DomainError("continuous mixing: density integrates to " + fmt(mass));
  }
  MixingLaw law;
  law.discrete_ = false;
  law.dim_ = lo.size();
  law.lo_ = std::move(lo);
  law.hi_ = std::move(hi);
  law.density_ = std::move(density);
  law.sampler_ = std::move(sampler);
  law.name_ = std::move(name);
  return law;
}

MixingLaw MixingLaw::uniform_box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.empty() || lo.size() != hi.size()) throw DomainError("uniform box: bad box");
  double volume = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) volume *= hi[i] - lo[i];
  const double density = 1.0 / volume;
  std::string name = "uniform:" + fmt(lo) + "/" + fmt(hi);
  bool cube = std::all_of(lo.begin(), lo.end(), [&](double v) { return v == lo[0]; }) &&
              std::all_of(hi.begin(), hi.end(), [&](double v) { return v == hi[0]; });
  if (cube) name = "uniform:" + fmt(lo[0]) + "," + fmt(hi[0]) + "^" + std::to_string(lo.size());
  auto sampler = [lo, hi](Rng& rng) {
    std::vector<double> t(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) t[i] = lo[i] + (hi[i] - lo[i]) * rng.uniform();
    return t;
  };
  auto law = continuous(std::move(lo), std::move(hi),
                        [density](std::span<const double>) { return density; }, sampler,
                        std::move(name));
  law.uniform_ = true;
  return law;
}

MixingLaw MixingLaw::logarithmic(double c) {
  const auto law = std::make_shared<LogarithmicLaw>(c);
  const double log_c = std::log(c);
  return continuous({1.0}, {c},
                    [log_c](std::span<const double> t) { return 1.0 / (t[0] * log_c); },
                    [law](Rng& rng) { return std::vector<double>{law->sample(rng)}; },
                    "log:" + fmt(c));
}

MixingLaw MixingLaw::parse(std::string_view spec, std::size_t dim) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("mixing law '" + std::string(spec) + "' lacks a ':'");
  }
  const auto kind = spec.substr(0, colon);
  const auto body = spec.substr(colon + 1);
  if (kind == "point") {
    auto t = split_numbers(body, ',');
    if (t.size() == 1 && dim > 1) t.assign(dim, t[0]);
    if (t.size() != dim) throw ConfigError("point mixing has wrong dimension");
    return point(std::move(t));
  }
  if (kind == "uniform") {
    auto ab = split_numbers(body, ',');
    if (ab.size() != 2) throw ConfigError("uniform mixing needs 'a,b'");
    return uniform_box(std::vector<double>(dim, ab[0]), std::vector<double>(dim, ab[1]));
  }
  if (kind == "log") {
    auto c = split_numbers(body, ',');
    if (c.size() != 1 || dim != 1) throw ConfigError("log mixing needs one ratio and d = 1");
    return logarithmic(c[0]);
  }
  if (kind == "discrete") {
    std::vector<Atom> atoms;
    std::size_t start = 0;
    while (start <= body.size()) {
      auto end = body.find(';', start);
      if (end == std::string_view::npos) end = body.size();
      const auto piece = body.substr(start, end - start);
      const auto at = piece.find('@');
      if (at == std::string_view::npos) throw ConfigError("discrete atom needs 't@w'");
      auto t = split_numbers(piece.substr(0, at), ',');
      auto w = split_numbers(piece.substr(at + 1), ',');
      if (w.size() != 1) throw ConfigError("discrete atom weight malformed");
      if (t.size() == 1 && dim > 1) t.assign(dim, t[0]);
      atoms.push_back(Atom{std::move(t), w[0]});
      start = end + 1;
    }
    return discrete(std::move(atoms));
  }
  throw ConfigError("unknown mixing law kind '" + std::string(kind) + "'");
}

std::vector<double> MixingLaw::sample(Rng& rng) const {
  if (!discrete_) return sampler_(rng);
  if (atoms_.size() == 1) return atoms_[0].t;
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = std::min<std::size_t>(it - cumulative_.begin(), atoms_.size() - 1);
  return atoms_[idx].t;
}

double MixingLaw::expectation(const std::function<double(std::span<const double>)>& f,
                              double tol) const {
  if (discrete_) {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.weight * f(a.t);
    return s;
  }
  return integrate_box([&](std::span<const double> t) { return f(t) * density_(t); }, lo_,
                       hi_, tol);
}

// ---------------------------------------------------------------------------

MixtureLaw::MixtureLaw(LimitFamilyPtr family, MixingLaw mixing)
    : family_(std::move(family)), mixing_(std::move(mixing)) {
  if (!family_) throw DomainError("mixture law needs a family");
  if (family_->dimension() != mixing_.dimension()) {
    throw DomainError("mixture law: family and mixing law dimensions differ");
  }
}

double MixtureLaw::sample(Rng& rng) const {
  const auto t = mixing_.sample(rng);
  return family_->sample(t, rng);
}

double MixtureLaw::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("mixture cdf at NaN");
  if (x == kInf) return 1.0;
  if (x == -kInf) return 0.0;
  if (mixing_.is_uniform_box()) {
    // Last coordinate in closed form when the family has one.
    const auto lo = mixing_.lower();
    const auto hi = mixing_.upper();
    const std::size_t head = lo.size() - 1;
    auto inner = [&](std::span<const double> t) {
      return family_->cdf_uniform_last(t, lo[head], hi[head], x);
    };
    if (const auto first = inner(lo.first(head))) {
      if (head == 0) return std::clamp(*first, 0.0, 1.0);
      double volume = 1.0;
      for (std::size_t i = 0; i < head; ++i) volume *= hi[i] - lo[i];
      const double v = integrate_box([&](std::span<const double> t) { return *inner(t); },
                                     lo.first(head), hi.first(head), 1e-8 * volume) /
                       volume;
      return std::clamp(v, 0.0, 1.0);
    }
  }
  const double v =
      mixing_.expectation([&](std::span<const double> t) { return family_->cdf(t, x); });
  return std::clamp(v, 0.0, 1.0);
}

double MixtureLaw::cdf_left(double x) const {
  if (!mixing_.is_discrete()) return cdf(x);
  if (std::isnan(x)) throw DomainError("mixture cdf at NaN");
  if (x == kInf) return 1.0;
  if (x == -kInf) return 0.0;
  const double v =
      mixing_.expectation([&](std::span<const double> t) { return family_->cdf_left(t, x); });
  return std::clamp(v, 0.0, 1.0);
}

Support MixtureLaw::support() const {
  Support s{kInf, -kInf, true};
  auto merge = [&](std::span<const double> t) {
    const auto part = family_->at(t)->support();
    s.lo = std::min(s.lo, part.lo);
    s.hi = std::max(s.hi, part.hi);
    s.lattice = s.lattice && part.lattice;
  };
  if (mixing_.is_discrete()) {
    for (const auto& a : mixing_.atoms()) merge(a.t);
  } else {
    merge(mixing_.lower());
    merge(mixing_.upper());
    s.lattice = false;
  }
  return s;
}

std::vector<double> MixtureLaw::atoms(double lo, double hi) const {
  if (!mixing_.is_discrete()) return {};
  std::vector<double> out;
  for (const auto& a : mixing_.atoms()) {
    auto part = family_->at(a.t)->atoms(lo, hi);
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string MixtureLaw::describe() const {
  return "Mixture[" + family_->describe() + " | " + mixing_.describe() + "]";
}

double mixture_cdf(const MixtureLaw& m, double x) { return m.cdf(x); }

double mixture_sample(const MixtureLaw& m, Rng& rng) { return m.sample(rng); }

}  // namespace transferlab
