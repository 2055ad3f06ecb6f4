// Copyright 2026 The backaction-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BACKACTION_RNG_HPP
#define BACKACTION_RNG_HPP

#include <cstdint>

namespace backaction::rng {

// SplitMix64 (Steele, Lea, Flood 2014) used in counter mode: the value for
// draw index i under a seed is a pure function mix(seed, i). Draws can
// therefore be partitioned across threads arbitrarily without changing the
// merged sample, and identical (seed, index) pairs always reproduce.

inline uint64_t splitmix64_next(uint64_t &state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// 64-bit value for draw `index` of stream `stream` under `seed`.
inline uint64_t counter_u64(uint64_t seed, uint64_t stream, uint64_t index) {
  uint64_t state = seed + stream * 0xD1B54A32D192ED03ull +
                   index * 0x9E3779B97F4A7C15ull;
  return splitmix64_next(state);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double counter_uniform(uint64_t seed, uint64_t stream, uint64_t index) {
  return static_cast<double>(counter_u64(seed, stream, index) >> 11) *
         0x1.0p-53;
}

/// Small sequential generator for test helpers (not used by the sampler).
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}
  uint64_t next_u64() { return splitmix64_next(state_); }
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  uint64_t state_;
};

}  // namespace backaction::rng

#endif
