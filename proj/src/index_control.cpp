// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include "index_control.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "errors.hpp"

namespace transferlab {

MultiIndex::MultiIndex(std::vector<std::uint64_t> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw DomainError("MultiIndex needs at least one coordinate");
  for (auto c : coords_) {
    if (c == 0) throw DomainError("MultiIndex coordinates must be >= 1");
  }
}

std::uint64_t MultiIndex::volume() const {
  std::uint64_t v = 1;
  for (auto c : coords_) {
    if (__builtin_mul_overflow(v, c, &v)) {
      throw DomainError("MultiIndex volume overflows 64 bits: " + to_string());
    }
  }
  return v;
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? "," : "") << coords_[i];
  os << ')';
  return os.str();
}

SamplingSequence SamplingSequence::geometric(double c) {
  if (!(c > 1.0) || !std::isfinite(c)) {
    throw DomainError("geometric sampling sequence needs ratio c > 1");
  }
  if (c == 2.0) return SamplingSequence(Kind::power_of_two, 2.0);
  return SamplingSequence(Kind::geometric, c);
}

SamplingSequence SamplingSequence::parse(std::string_view text) {
  if (text == "identity" || text == "n") return identity();
  if (text == "square" || text == "n2") return square();
  if (text == "pow2" || text == "2^n") return power_of_two();
  if (text.starts_with("geom:")) {
    const std::string num(text.substr(5));
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != num.size() || num.empty()) {
      throw ConfigError("bad geometric sampling sequence: " + std::string(text));
    }
    return geometric(c);
  }
  throw ConfigError("unknown sampling sequence: " + std::string(text));
}

std::string SamplingSequence::name() const {
  switch (kind_) {
    case Kind::identity: return "identity";
    case Kind::square: return "square";
    case Kind::power_of_two: return "pow2";
    case Kind::geometric: {
      std::ostringstream os;
      os.precision(17);
      os << "geom:" << ratio_;
      return os.str();
    }
  }
  return "?";
}

double SamplingSequence::value(std::uint64_t n) const {
  switch (kind_) {
    case Kind::identity: return static_cast<double>(n);
    case Kind::square: return static_cast<double>(n) * static_cast<double>(n);
    case Kind::power_of_two: return std::ldexp(1.0, static_cast<int>(std::min<std::uint64_t>(n, 4096)));
    case Kind::geometric: return static_cast<double>(integer(n));
  }
  return 0.0;
}

std::uint64_t SamplingSequence::integer(std::uint64_t n) const {
  constexpr std::uint64_t kMax = std::uint64_t{1} << 62;
  switch (kind_) {
    case Kind::identity: return n;
    case Kind::square:
      if (n > 2147483647ULL) throw DomainError("k_n = n^2 overflows");
      return n * n;
    case Kind::power_of_two:
      if (n > 62) throw DomainError("k_n = 2^n overflows");
      return std::uint64_t{1} << n;
    case Kind::geometric: {
      std::uint64_t k = 1;
      double power = 1.0;
      for (std::uint64_t j = 1; j <= n; ++j) {
        power *= ratio_;
        if (power >= static_cast<double>(kMax)) throw DomainError("k_n = c^n overflows");
        const auto rounded = static_cast<std::uint64_t>(std::llround(power));
        k = std::max(k + 1, rounded);
      }
      return k;
    }
  }
  return 0;
}

std::vector<double> phi_triangular(std::uint64_t n, const MultiIndex& N,
                                   std::span<const SamplingSequence> k_seq) {
  if (n == 0) throw DomainError("phi_triangular: n must be >= 1");
  if (N.size() != k_seq.size()) {
    throw DomainError("phi_triangular: one sampling sequence per coordinate required");
  }
  std::vector<double> out;
  out.reserve(1 + N.size());
  out.push_back(1.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < N.size(); ++i) {
    out.push_back(static_cast<double>(N[i]) / k_seq[i].value(n));
  }
  return out;
}

RegimePoint phi_alloc(unsigned r, std::uint64_t T, std::uint64_t U) {
  if (T == 0 || U == 0) throw DomainError("phi_alloc: T and U must be >= 1");
  const double t = static_cast<double>(T);
  const double u = static_cast<double>(U);
  RegimePoint p;
  double log_d = 0.0;
  if (r == 0) {
    p.g = 2.0 * u / (t * t);
    log_d = t / u - std::log(u);
  } else if (r == 1) {
    p.g = u / (t * t);
    log_d = t / u - std::log(t);
  } else {
    const double rr = static_cast<double>(r);
    p.g = 1.0 / t;
    log_d = std::lgamma(rr + 1.0) + (rr - 1.0) * std::log(u) - rr * std::log(t) + t / u;
  }
  static const double kLogMax = std::log(DBL_MAX);
  if (log_d >= kLogMax) {
    p.d = std::numeric_limits<double>::infinity();
    p.saturated = true;
  } else {
    p.d = std::exp(log_d);
  }
  return p;
}

LimitTag classify_regime(unsigned r, const RegimePoint& point) {
  const double g = point.g;
  const double d = point.d;
  LimitTag undefined{};
  if (point.saturated || !std::isfinite(g) || !std::isfinite(d) || g < 0.0 || d < 0.0) {
    return undefined;
  }
  if (r == 0) {
    if (g == 0.0 && d == 0.0) return {LimitTag::Kind::normal, 0.0};
    if (g > 0.0 && d == 0.0) return {LimitTag::Kind::poisson_std, 1.0 / g};
    if (g == 0.0 && d > 0.0) return {LimitTag::Kind::poisson_std, 1.0 / d};
    return undefined;
  }
  if (g != 0.0) return undefined;
  if (d == 0.0) return {LimitTag::Kind::normal, 0.0};
  return {LimitTag::Kind::poisson_std, 1.0 / d};
}

std::string to_string(const LimitTag& tag) {
  switch (tag.kind) {
    case LimitTag::Kind::normal: return "Normal";
    case LimitTag::Kind::poisson_std: {
      std::ostringstream os;
      os.precision(12);
      os << "PoissonStd(" << tag.lambda << ")";
      return os.str();
    }
    case LimitTag::Kind::undefined: return "Undefined";
  }
  return "Undefined";
}

ControlMap triangular_map(std::vector<SamplingSequence> k_seq) {
  ControlMap map;
  map.name = "triangular";
  map.dimension_in = 1 + k_seq.size();
  map.dimension_out = 1 + k_seq.size();
  map.eval = [k = std::move(k_seq)](const MultiIndex& idx) {
    if (idx.size() != 1 + k.size()) throw DomainError("triangular map: wrong index dimension");
    std::vector<std::uint64_t> rest(idx.coords().begin() + 1, idx.coords().end());
    return phi_triangular(idx[0], MultiIndex(std::move(rest)), k);
  };
  map.in_delta = [](std::span<const double> x) {
    if (x.empty() || x[0] != 0.0) return false;
    return std::all_of(x.begin() + 1, x.end(),
                       [](double v) { return v >= 0.0 && std::isfinite(v); });
  };
  map.delta_description = "{0} x [0,inf)^d";
  return map;
}

ControlMap lattice_ratio_map(std::size_t d) {
  if (d == 0) throw DomainError("lattice_ratio_map: d must be >= 1");
  ControlMap map;
  map.name = "lattice-ratio";
  map.dimension_in = 2 * d;
  map.dimension_out = 2 * d;
  map.eval = [d](const MultiIndex& idx) {
    if (idx.size() != 2 * d) throw DomainError("lattice ratio map: wrong index dimension");
    std::vector<double> out(2 * d);
    for (std::size_t i = 0; i < d; ++i) {
      const double n = static_cast<double>(idx[i]);
      out[i] = 1.0 / n;
      out[d + i] = static_cast<double>(idx[d + i]) / n;
    }
    return out;
  };
  map.in_delta = [d](std::span<const double> x) {
    if (x.size() != 2 * d) return false;
    for (std::size_t i = 0; i < d; ++i) {
      if (x[i] != 0.0) return false;
      if (!(x[d + i] >= 0.0) || !std::isfinite(x[d + i])) return false;
    }
    return true;
  };
  map.delta_description = "{0}^d x [0,inf)^d";
  return map;
}

ControlMap allocation_map(unsigned r) {
  ControlMap map;
  map.name = "allocation-r" + std::to_string(r);
  map.dimension_in = 2;
  map.dimension_out = 2;
  map.eval = [r](const MultiIndex& idx) {
    if (idx.size() != 2) throw DomainError("allocation map: index must be (T, U)");
    const auto p = phi_alloc(r, idx[0], idx[1]);
    return std::vector<double>{p.g, p.d};
  };
  map.in_delta = [r](std::span<const double> x) {
    if (x.size() != 2) return false;
    return classify_regime(r, RegimePoint{x[0], x[1], false}).kind !=
           LimitTag::Kind::undefined;
  };
  map.delta_description =
      r == 0 ? "(R+ x {0}) u ({0} x R+)" : "{0} x R+";
  return map;
}

namespace {

std::vector<std::vector<double>> evaluate_all(const ControlMap& map,
                                              std::span<const MultiIndex> probe) {
  std::vector<std::vector<double>> images;
  images.reserve(probe.size());
  for (const auto& idx : probe) {
    auto v = map.eval(idx);
    if (v.size() != map.dimension_out) {
      throw DomainError("control map '" + map.name + "' returned wrong dimension");
    }
    images.push_back(std::move(v));
  }
  return images;
}

}  // namespace

InjectivityReport probe_injectivity(const ControlMap& map,
                                    std::span<const MultiIndex> probe) {
  if (probe.empty()) throw DomainError("probe_injectivity: empty probe");
  const auto images = evaluate_all(map, probe);
  std::vector<std::size_t> order(probe.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return images[a] < images[b];
  });
  InjectivityReport report;
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto a = order[i - 1];
    const auto b = order[i];
    if (images[a] == images[b] && !(probe[a] == probe[b])) {
      report.injective = false;
      report.witness.emplace(probe[std::min(a, b)], probe[std::max(a, b)]);
      return report;
    }
  }
  return report;
}

double probe_separation(const ControlMap& map, std::span<const MultiIndex> probe) {
  if (probe.size() < 2) throw DomainError("probe_separation: need two probe points");
  auto images = evaluate_all(map, probe);
  std::sort(images.begin(), images.end());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      const double dx0 = images[j][0] - images[i][0];
      if (dx0 >= best) break;
      double sq = 0.0;
      for (std::size_t k = 0; k < images[i].size(); ++k) {
        const double diff = images[j][k] - images[i][k];
        sq += diff * diff;
      }
      best = std::min(best, std::sqrt(sq));
    }
  }
  return best;
}

std::vector<MultiIndex> grid_probe(
    std::span<const std::pair<std::uint64_t, std::uint64_t>> ranges) {
  if (ranges.empty()) throw DomainError("grid_probe: no ranges");
  std::vector<std::vector<std::uint64_t>> points{{}};
  for (const auto& [lo, hi] : ranges) {
    if (lo == 0 || hi < lo) throw DomainError("grid_probe: bad range");
    std::vector<std::vector<std::uint64_t>> next;
    next.reserve(points.size() * (hi - lo + 1));
    for (const auto& p : points) {
      for (auto v = lo; v <= hi; ++v) {
        next.push_back(p);
        next.back().push_back(v);
      }
    }
    points = std::move(next);
  }
  std::vector<MultiIndex> out;
  out.reserve(points.size());
  for (auto& p : points) out.emplace_back(std::move(p));
  return out;
}

}  // namespace transferlab
