// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#include "mc_engine.hpp"

#include <cstdlib>
#include <string>

namespace transferlab {

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kWorkersEnv); env != nullptr && *env != '\0') {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

EmpiricalDistribution run_replicated(const ReplicationPlan& plan,
                                     const std::function<double(Rng&)>& task) {
  return EmpiricalDistribution(replicate<double>(plan, task));
}

}  // namespace transferlab
