// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace transferlab {

/// H_n = 1 + 1/2 + ... + 1/n (H_0 = 0). Direct summation up to 4096 terms,
/// Euler-Maclaurin beyond; relative error below 1e-15.
double harmonic(std::uint64_t n);

/// sum_{k=a}^{b} 1/k, 0 when b < a. Long ranges are evaluated as
/// differences of the asymptotic expansion with log1p, so no cancellation.
double harmonic_range(std::uint64_t a, std::uint64_t b);

/// Smallest k in [1, cap] with H_k >= target, or cap. Exact while
/// consecutive H_k are resolvable in double (k <= 2^40); beyond that k is
/// ceil(exp(target - gamma) - 1/2), the inverse of log(k + 1/2) + gamma.
std::uint64_t harmonic_inverse(double target, std::uint64_t cap);

}  // namespace transferlab
