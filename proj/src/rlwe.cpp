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

#include "latsamp/rlwe.hpp"

#include <stdexcept>

namespace latsamp {

GaussianPolySampler::GaussianPolySampler(const ParameterSet& params, SamplerAlg alg,
                                         std::size_t zig_rectangles)
    : params_(params), alg_(alg) {
  if (alg == SamplerAlg::kKnuthYao) {
    ky_ = std::make_shared<const ProbabilityMatrix>(build_probability_matrix(params.gauss));
  } else {
    zig_ = std::make_shared<const ZigguratTable>(
        build_ziggurat_table(params.gauss, zig_rectangles));
  }
}

i64 GaussianPolySampler::sample(BitSource& src) const {
  return alg_ == SamplerAlg::kKnuthYao ? ky_sample(*ky_, src).value
                                       : zig_sample(*zig_, src).value;
}

Polynomial GaussianPolySampler::sample_polynomial(BitSource& src) const {
  const u64 q = params_.ring.q.value;
  Polynomial p(params_.ring.n, q);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const i64 v = sample(src);
    p.set(i, v < 0 ? q - static_cast<u64>(-v) : static_cast<u64>(v));
  }
  return p;
}

Polynomial uniform_polynomial(std::size_t n, u64 q, BitSource& src) {
  Polynomial p(n, q);
  for (std::size_t i = 0; i < n; ++i) {
    p.set(i, static_cast<u64>(src.uniform_below(q - 1)));
  }
  return p;
}

RlweSample make_rlwe_sample(const GaussianPolySampler& sampler, const NttPlan& plan,
                            BitSource& src, const RlweHooks& hooks) {
  const RingParams& ring = sampler.params().ring;
  RlweSample out;
  out.pair.a = uniform_polynomial(ring.n, ring.q.value, src);
  out.secret = hooks.secret ? *hooks.secret : sampler.sample_polynomial(src);
  out.error = hooks.error ? *hooks.error : sampler.sample_polynomial(src);
  out.pair.b = poly_mul(out.pair.a, out.secret, plan) + out.error;
  return out;
}

KeyPair keygen(const GaussianPolySampler& sampler, const NttPlan& plan, BitSource& src) {
  RlweSample s = make_rlwe_sample(sampler, plan, src);
  return {std::move(s.pair), std::move(s.secret)};
}

Ciphertext encrypt(const RlweSamplePair& pk, const Polynomial& message,
                   const GaussianPolySampler& sampler, const NttPlan& plan,
                   BitSource& src, bool zero_noise) {
  const u64 q = pk.a.modulus();
  const std::size_t n = pk.a.size();
  if (message.size() != n) throw std::invalid_argument("message length mismatch");
  Polynomial u(n, q), e1(n, q), e2(n, q);
  if (zero_noise) {
    u = Polynomial::monomial(n, q, 0);
  } else {
    u = sampler.sample_polynomial(src);
    e1 = sampler.sample_polynomial(src);
    e2 = sampler.sample_polynomial(src);
  }
  Polynomial encoded(n, q);
  for (std::size_t i = 0; i < n; ++i) {
    if (message[i] > 1) throw std::invalid_argument("message must be binary");
    encoded.set(i, message[i] * (q / 2));
  }
  return {poly_mul(pk.a, u, plan) + e1, poly_mul(pk.b, u, plan) + e2 + encoded};
}

Polynomial decryption_residual(const Polynomial& secret, const Ciphertext& ct,
                               const NttPlan& plan) {
  return ct.c2 - poly_mul(secret, ct.c1, plan);
}

Polynomial decrypt(const Polynomial& secret, const Ciphertext& ct, const NttPlan& plan) {
  const Polynomial v = decryption_residual(secret, ct, plan);
  const u64 q = v.modulus();
  Polynomial m(v.size(), q);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const i64 c = v.centered(i);
    const u64 mag = static_cast<u64>(c < 0 ? -c : c);
    // |c| > q/4, compared without rounding.
    m.set(i, 4 * mag > q ? 1 : 0);
  }
  return m;
}

}  // namespace latsamp
