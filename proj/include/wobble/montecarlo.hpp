/*
 * Copyright 2026 The uav-wobble Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file montecarlo.hpp
 * @brief Monte Carlo configuration and a deterministic parallel reducer.
 *
 * Realizations are cut into fixed blocks of kBlockSize. Each block is
 * accumulated serially in realization order, and block results are merged in
 * block order. The partition never depends on the thread count, so the
 * floating-point result is bit-identical for any number of workers.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "wobble/random.hpp"

namespace wobble {

struct McConfig {
  std::size_t n_realizations = 10000;
  std::uint64_t master_seed = 20260101;
  /// Worker threads; 0 selects std::thread::hardware_concurrency().
  unsigned n_threads = 1;

  void validate() const {
    if (n_realizations < 1) {
      throw std::invalid_argument("McConfig: n_realizations >= 1 violated");
    }
  }
};

inline constexpr std::size_t kBlockSize = 64;

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/**
 * Runs body(stream, r, acc) for every realization r in [0, n) and returns the
 * ordered merge of per-block accumulators. `make` builds an empty
 * accumulator, `merge(into, from)` folds one block into the running total.
 */
template <class Make, class Body, class Merge>
auto reduce_realizations(const McConfig& mc, Make make, Body body,
                         Merge merge) {
  using Acc = decltype(make());
  const std::size_t n = mc.n_realizations;
  const std::size_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<Acc> partial;
  partial.reserve(n_blocks);
  for (std::size_t b = 0; b < n_blocks; ++b) partial.push_back(make());

  auto run_block = [&](std::size_t b) {
    const std::size_t lo = b * kBlockSize;
    const std::size_t hi = std::min(n, lo + kBlockSize);
    for (std::size_t r = lo; r < hi; ++r) {
      auto stream = RandomStream::for_realization(mc.master_seed, r);
      body(stream, r, partial[b]);
    }
  };

  const auto workers = static_cast<unsigned>(
      std::min<std::size_t>(resolve_threads(mc.n_threads), n_blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (std::size_t b = next++; b < n_blocks; b = next++) run_block(b);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  Acc total = make();
  for (auto& p : partial) merge(total, p);
  return total;
}

}  // namespace wobble
