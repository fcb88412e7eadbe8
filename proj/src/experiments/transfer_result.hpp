// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "distributions.hpp"

namespace transferlab {

/// Empirical law of a randomly indexed quantity and the mixture it should
/// converge to.
struct TransferResult {
  EmpiricalDistribution empirical;
  std::shared_ptr<const MixtureLaw> target;
};

}  // namespace transferlab
