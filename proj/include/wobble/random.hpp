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
 * @file random.hpp
 * @brief Counter-based random streams for reproducible Monte Carlo.
 *
 * Every realization r of a run owns the stream derived from
 * (master_seed, r), so results do not depend on which thread produced them
 * or in which order. The generator is SplitMix64: the output is a bijective
 * 64-bit mix of a Weyl counter. Normals use the Box-Muller transform; the
 * second value of each pair is cached.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace wobble {

/// SplitMix64 / Stafford variant 13 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class RandomStream {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit RandomStream(std::uint64_t seed) noexcept : state_(mix64(seed)) {}

  /// Stream for realization `index` of a run seeded with `master_seed`.
  static RandomStream for_realization(std::uint64_t master_seed,
                                      std::uint64_t index) noexcept {
    return RandomStream(mix64(master_seed ^ mix64(index + kGamma)) ^ index);
  }

  std::uint64_t next_u64() noexcept {
    state_ += kGamma;
    return mix64(state_);
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1].
  double uniform_open0() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wobble
