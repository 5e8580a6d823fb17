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

#include "latsamp/rng.hpp"

#include <sodium.h>

#include <stdexcept>

namespace latsamp {

BitSource::BitSource(u64 seed) : seed_(seed) {
  if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
  for (unsigned i = 0; i < 8; ++i) {
    key_[i] = static_cast<unsigned char>(seed >> (8 * i));
  }
}

void BitSource::refill() {
  static const std::array<unsigned char, 64> zeros{};
  static const std::array<unsigned char, 8> nonce{};
  crypto_stream_chacha20_xor_ic(block_.data(), zeros.data(), zeros.size(),
                                nonce.data(), counter_, key_.data());
  ++counter_;
  bit_pos_ = 0;
}

bool BitSource::next_bit() {
  if (bit_pos_ == 512) refill();
  unsigned byte = block_[bit_pos_ >> 3];
  bool bit = (byte >> (7 - (bit_pos_ & 7))) & 1u;
  ++bit_pos_;
  ++bits_consumed_;
  return bit;
}

u128 BitSource::next_bits(unsigned k) {
  if (k < 1 || k > 128) throw std::invalid_argument("next_bits: k in [1,128]");
  u128 v = 0;
  while (k != 0) {
    if (bit_pos_ == 512) refill();
    if ((bit_pos_ & 7) == 0 && k >= 8) {
      v = (v << 8) | block_[bit_pos_ >> 3];
      bit_pos_ += 8;
      bits_consumed_ += 8;
      k -= 8;
    } else {
      v = (v << 1) | static_cast<u128>(next_bit());
      --k;
    }
  }
  return v;
}

u128 BitSource::uniform_below(u128 bound) {
  if (bound == 0) return 0;
  const unsigned k = bit_width(bound);
  for (;;) {
    u128 v = next_bits(k);
    if (v <= bound) return v;
  }
}

}  // namespace latsamp
