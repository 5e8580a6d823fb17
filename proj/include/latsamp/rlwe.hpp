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

#ifndef LATSAMP_RLWE_HPP_
#define LATSAMP_RLWE_HPP_

#include <memory>
#include <optional>

#include "latsamp/arith.hpp"
#include "latsamp/datapath.hpp"
#include "latsamp/knuth_yao.hpp"
#include "latsamp/ntt.hpp"
#include "latsamp/rng.hpp"
#include "latsamp/ziggurat.hpp"

namespace latsamp {

// Coefficient-wise Gaussian polynomials from either sampler.
class GaussianPolySampler {
 public:
  GaussianPolySampler(const ParameterSet& params, SamplerAlg alg,
                      std::size_t zig_rectangles = 64);

  SamplerAlg alg() const { return alg_; }
  const ParameterSet& params() const { return params_; }
  SamplerTables tables() const { return {ky_.get(), zig_.get()}; }

  i64 sample(BitSource& src) const;
  // Lifted to [0, q).
  Polynomial sample_polynomial(BitSource& src) const;

 private:
  ParameterSet params_;
  SamplerAlg alg_;
  std::shared_ptr<const ProbabilityMatrix> ky_;
  std::shared_ptr<const ZigguratTable> zig_;
};

Polynomial uniform_polynomial(std::size_t n, u64 q, BitSource& src);

struct RlweSamplePair {
  Polynomial a;
  Polynomial b;
};

struct KeyPair {
  RlweSamplePair pub;
  Polynomial secret;
};

struct RlweSample {
  RlweSamplePair pair;
  Polynomial secret;
  Polynomial error;
};

// Test hooks: replace the sampled secret and/or error.
struct RlweHooks {
  std::optional<Polynomial> secret;
  std::optional<Polynomial> error;
};

RlweSample make_rlwe_sample(const GaussianPolySampler& sampler, const NttPlan& plan,
                            BitSource& src, const RlweHooks& hooks = {});

KeyPair keygen(const GaussianPolySampler& sampler, const NttPlan& plan, BitSource& src);

struct Ciphertext {
  Polynomial c1;
  Polynomial c2;
};

// zero_noise forces u = 1 and e1 = e2 = 0.
Ciphertext encrypt(const RlweSamplePair& pk, const Polynomial& message,
                   const GaussianPolySampler& sampler, const NttPlan& plan,
                   BitSource& src, bool zero_noise = false);

// Coefficients of c2 - s*c1 nearer to q/2 than to 0 decode to 1.
Polynomial decrypt(const Polynomial& secret, const Ciphertext& ct, const NttPlan& plan);

// Raw decoding input c2 - s*c1.
Polynomial decryption_residual(const Polynomial& secret, const Ciphertext& ct,
                               const NttPlan& plan);

}  // namespace latsamp

#endif  // LATSAMP_RLWE_HPP_
