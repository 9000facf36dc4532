// Copyright 2026 The ProxyForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace proxyforge::raster {

// One SplitMix64 output step applied to `x` (increment, then mix).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Per-sample seed: SplitMix64(global ^ FNV1a64(sample_id) ^ task_code * golden).
constexpr std::uint64_t derive_seed(std::uint64_t global_seed,
                                    std::string_view sample_id,
                                    std::uint16_t task_code) noexcept {
  return splitmix64(global_seed ^ fnv1a64(sample_id) ^
                    (static_cast<std::uint64_t>(task_code) * 0x9E3779B97F4A7C15ULL));
}

// SplitMix64 stream. All distributions are implemented here rather than via
// <random> so that byte-level outputs are identical across standard libraries.
class Rng64 {
 public:
  explicit Rng64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    std::uint64_t out = splitmix64(state_);
    state_ += 0x9E3779B97F4A7C15ULL;
    return out;
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t n) noexcept;

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept;

  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept;

  // Fresh independent seed for a sub-stream.
  std::uint64_t fork() noexcept { return splitmix64(next_u64() ^ 0xD1B54A32D192ED03ULL); }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
  std::optional<double> spare_normal_;
};

}  // namespace proxyforge::raster
