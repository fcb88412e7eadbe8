// Copyright 2026 The transferlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "distributions.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace transferlab {

/// Environment variable capping the worker count.
inline constexpr const char* kWorkersEnv = "TRANSFERLAB_WORKERS";

/// Replicate i always draws from stream (master_seed, seed.stream_id + i).
struct ReplicationPlan {
  std::size_t replicates = 1;
  std::size_t chunk_size = 64;
  SeedSpec seed;
  /// 0 means: TRANSFERLAB_WORKERS if set, else hardware concurrency.
  unsigned workers = 0;
};

/// Worker count actually used for `requested` (see ReplicationPlan::workers).
unsigned resolve_workers(unsigned requested);

/// Runs task(rng_i) for every replicate and returns the results in replicate
/// order. Scheduling never influences the output.
template <class T, class Task>
std::vector<T> replicate(const ReplicationPlan& plan, Task&& task) {
  if (plan.replicates == 0) throw Error(ErrorCode::invalid_argument, "replicates must be >= 1");
  const std::size_t chunk = std::max<std::size_t>(plan.chunk_size, 1);
  const std::size_t chunks = (plan.replicates + chunk - 1) / chunk;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_workers(plan.workers), chunks));

  std::vector<T> out(plan.replicates);
  std::atomic<std::size_t> next_chunk{0};
  std::atomic<bool> abort{false};
  std::mutex failure_mutex;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::string failure;

  auto work = [&] {
    for (;;) {
      if (abort.load(std::memory_order_relaxed)) return;
      const std::size_t c = next_chunk.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) return;
      const std::size_t end = std::min(plan.replicates, (c + 1) * chunk);
      for (std::size_t i = c * chunk; i < end; ++i) {
        try {
          Rng rng(SeedSpec{plan.seed.master_seed, plan.seed.stream_id + i});
          out[i] = task(rng);
        } catch (const std::exception& e) {
          std::lock_guard lock(failure_mutex);
          if (i < failed_index) {
            failed_index = i;
            failure = e.what();
          }
          abort.store(true, std::memory_order_relaxed);
          return;
        }
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (abort.load()) throw ReplicateError(failed_index, failure);
  return out;
}

/// Empirical law of a real-valued replicate task.
EmpiricalDistribution run_replicated(const ReplicationPlan& plan,
                                     const std::function<double(Rng&)>& task);

}  // namespace transferlab
