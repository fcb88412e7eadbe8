// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace transferlab {

/// Identifies one random stream: a master seed plus a stream index.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

/// 64-bit avalanche finalizer (the splitmix64 output function).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based seed derivation. The stream index is offset by the golden
/// gamma and mixed once, xor'ed into the master seed, then mixed again, so the
/// generator state of stream i never depends on how many streams came before.
constexpr std::uint64_t derive_seed(SeedSpec spec) noexcept {
  constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  return mix64(spec.master_seed ^ mix64(spec.stream_id + kGamma));
}

/// Per-replicate random source. Owns its engine; never shared across threads.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(SeedSpec spec) : engine_(derive_seed(spec)) {}
  explicit Rng(std::uint64_t master_seed, std::uint64_t stream_id = 0)
      : Rng(SeedSpec{master_seed, stream_id}) {}

  engine_type& engine() noexcept { return engine_; }

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1): never returns 0.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n); n must be positive. Lemire's multiply-shift
  /// with rejection, so the result is exactly uniform.
  std::uint64_t index(std::uint64_t n);

  /// Standard normal (polar method; the second variate is kept for the
  /// next call, so the sequence depends only on this stream).
  double normal();

  std::uint64_t poisson(double mean);

  std::uint64_t binomial(std::uint64_t trials, double p);

 private:
  engine_type engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace transferlab
