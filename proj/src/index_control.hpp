// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace transferlab {

/// A point of N^d: every coordinate is a positive integer.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::uint64_t> coords);
  MultiIndex(std::initializer_list<std::uint64_t> coords)
      : MultiIndex(std::vector<std::uint64_t>(coords)) {}

  std::size_t size() const noexcept { return coords_.size(); }
  std::uint64_t operator[](std::size_t i) const { return coords_[i]; }
  std::span<const std::uint64_t> coords() const noexcept { return coords_; }

  /// |n| = n_1 * ... * n_d. Throws DomainError on 64-bit overflow.
  std::uint64_t volume() const;

  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<std::uint64_t> coords_;
};

/// Strictly increasing sampling sequence (k_n). Geometric sequences start at
/// k_0 = 1 and use round(c^n), bumped by one where rounding would stall.
class SamplingSequence {
 public:
  enum class Kind { identity, square, power_of_two, geometric };

  static SamplingSequence identity() { return SamplingSequence(Kind::identity, 1.0); }
  static SamplingSequence square() { return SamplingSequence(Kind::square, 1.0); }
  static SamplingSequence power_of_two() {
    return SamplingSequence(Kind::power_of_two, 2.0);
  }
  static SamplingSequence geometric(double c);

  /// Accepts "identity", "square", "pow2" and "geom:<c>".
  static SamplingSequence parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  /// Growth ratio c for geometric kinds, 1 otherwise.
  double ratio() const noexcept { return ratio_; }
  std::string name() const;

  /// k_n as a double (exact for powers of two and for n^2 below 2^53).
  double value(std::uint64_t n) const;
  /// k_n as an integer. Throws DomainError when it does not fit in 63 bits.
  std::uint64_t integer(std::uint64_t n) const;

 private:
  SamplingSequence(Kind kind, double ratio) : kind_(kind), ratio_(ratio) {}
  Kind kind_;
  double ratio_;
};

/// phi(n, N) = (1/n, N_1/k_{n,1}, ..., N_d/k_{n,d}).
std::vector<double> phi_triangular(std::uint64_t n, const MultiIndex& N,
                                   std::span<const SamplingSequence> k_seq);

/// Image point of an allocation control map. Coordinates may be +inf when
/// e^{T/U} overflows; `saturated` tags that case.
struct RegimePoint {
  double g = 0.0;
  double d = 0.0;
  bool saturated = false;
};

/// phi_r(T, U) for r = 0, r = 1 and r >= 2, evaluated in log space.
RegimePoint phi_alloc(unsigned r, std::uint64_t T, std::uint64_t U);

struct LimitTag {
  enum class Kind { normal, poisson_std, undefined };
  Kind kind = Kind::undefined;
  double lambda = 0.0;  // only meaningful for poisson_std

  friend bool operator==(const LimitTag&, const LimitTag&) = default;
};

/// Limit law attached to a point of Delta_r. Exact-zero tests on g and d;
/// infinite, negative or NaN coordinates are outside Delta.
LimitTag classify_regime(unsigned r, const RegimePoint& point);

std::string to_string(const LimitTag& tag);

/// Injective map from multi-indices to R^l with a discrete image, plus the
/// membership test for its set Delta of admissible limit points.
struct ControlMap {
  std::string name;
  std::size_t dimension_in = 1;
  std::size_t dimension_out = 1;
  std::function<std::vector<double>(const MultiIndex&)> eval;
  std::function<bool(std::span<const double>)> in_delta;
  std::string delta_description;
};

/// (n, N_1..N_d) -> phi_triangular. Delta = {0} x [0, inf)^d.
ControlMap triangular_map(std::vector<SamplingSequence> k_seq);

/// (n_1..n_d, N_1..N_d) -> (1/n, N/n). Delta = {0}^d x [0, inf)^d.
ControlMap lattice_ratio_map(std::size_t d);

/// (T, U) -> phi_r(T, U). Delta_0 is the union of the two half axes, Delta_r
/// for r >= 1 is {0} x [0, inf).
ControlMap allocation_map(unsigned r);

struct InjectivityReport {
  bool injective = true;
  std::optional<std::pair<MultiIndex, MultiIndex>> witness;
};

/// Exact-equality injectivity check of map.eval over the probe set.
InjectivityReport probe_injectivity(const ControlMap& map,
                                    std::span<const MultiIndex> probe);

/// Smallest Euclidean distance between images of distinct probe points
/// (0 when two coincide). Probe needs at least two points.
double probe_separation(const ControlMap& map, std::span<const MultiIndex> probe);

/// Cartesian grid prod_i [lo_i, hi_i] of multi-indices.
std::vector<MultiIndex> grid_probe(
    std::span<const std::pair<std::uint64_t, std::uint64_t>> ranges);

}  // namespace transferlab
