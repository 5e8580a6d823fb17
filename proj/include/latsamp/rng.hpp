/*
 * Copyright 2026 The latsamp Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LATSAMP_RNG_HPP_
#define LATSAMP_RNG_HPP_

#include <array>
#include <cstdint>

#include "latsamp/wide.hpp"

namespace latsamp {

// Deterministic stream of uniform bits: the ChaCha20 keystream under a key
// derived from the 64-bit seed, read most-significant-bit first per byte.
// Single-owner; not safe for concurrent use.
class BitSource {
 public:
  explicit BitSource(u64 seed);

  bool next_bit();

  // k bits, most significant first, 1 <= k <= 128.
  u128 next_bits(unsigned k);

  // Uniform integer in [0, bound] by rejection on bit_width(bound)-bit draws.
  u128 uniform_below(u128 bound);

  u64 seed() const { return seed_; }
  u64 bits_consumed() const { return bits_consumed_; }

 private:
  void refill();

  u64 seed_;
  std::array<unsigned char, 32> key_{};
  std::array<unsigned char, 64> block_{};
  u64 counter_ = 0;
  unsigned bit_pos_ = 512;  // bits of block_ already consumed
  u64 bits_consumed_ = 0;
};

}  // namespace latsamp

#endif  // LATSAMP_RNG_HPP_
