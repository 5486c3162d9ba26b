// core/rng.hpp

// Copyright 2026 The tlbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TLB_CORE_RNG_HPP
#define TLB_CORE_RNG_HPP

#include <cstdint>

namespace tlb::rng {

// Algorithm identifier recorded in every report. The generator is
// SplitMix64 (Steele, Lea & Flood 2014): state walks the golden-ratio
// sequence and each output is a finalizing mix of the state. Streams are
// derived, not stepped, so any (master seed, index) pair addresses its
// stream in O(1) and parallel trials reproduce the sequential results.
inline constexpr char kAlgorithmId[] = "splitmix64-v1";

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Child seed for stream `index` of a master seed. Distinct indices give
/// decorrelated streams; identical inputs give identical streams.
constexpr std::uint64_t derive_stream(std::uint64_t master,
                                      std::uint64_t index) noexcept {
  return mix64(master ^ mix64((index + 1) * kGoldenGamma));
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  /// Uniform double in [0, 1), 53 significant bits.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Rademacher sign, +1 or -1.
  int next_sign() noexcept { return (next_u64() >> 63) ? 1 : -1; }

 private:
  std::uint64_t state_;
};

}  // namespace tlb::rng

#endif  // TLB_CORE_RNG_HPP
