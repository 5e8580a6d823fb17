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

#ifndef LATSAMP_ALU_HPP_
#define LATSAMP_ALU_HPP_

#include "latsamp/wide.hpp"

namespace latsamp {

// Arithmetic the samplers need beyond comparisons. Implementations either
// compute in place (dedicated sampler hardware) or route each operation onto
// borrowed datapath units. All results are exact.
class SamplerAlu {
 public:
  virtual ~SamplerAlu() = default;

  // a + b + carry_in in a two's-complement register of `width` bits.
  virtual i128 add(i128 a, i128 b, unsigned carry_in, unsigned width) = 0;
  virtual Wide add_wide(const Wide& a, const Wide& b, unsigned width) = 0;

  // Unsigned products: k < 2^k_bits times x < 2^x_bits.
  virtual Wide mul_small(u128 k, u64 x, unsigned k_bits, unsigned x_bits) = 0;
  virtual Wide mul_wide(u128 a, const Wide& b, unsigned a_bits,
                        unsigned b_bits) = 0;
};

// Dedicated arithmetic inside the sampler; counts what it executes.
class NativeAlu final : public SamplerAlu {
 public:
  i128 add(i128 a, i128 b, unsigned carry_in, unsigned) override {
    ++add_ops;
    return a + b + carry_in;
  }
  Wide add_wide(const Wide& a, const Wide& b, unsigned) override {
    ++add_ops;
    return a + b;
  }
  Wide mul_small(u128 k, u64 x, unsigned, unsigned) override {
    ++mul_small_ops;
    return Wide(k) * x;
  }
  Wide mul_wide(u128 a, const Wide& b, unsigned, unsigned) override {
    ++mul_wide_ops;
    return Wide(a) * b;
  }

  u64 add_ops = 0;
  u64 mul_small_ops = 0;
  u64 mul_wide_ops = 0;
};

}  // namespace latsamp

#endif  // LATSAMP_ALU_HPP_
