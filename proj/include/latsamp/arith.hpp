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

#ifndef LATSAMP_ARITH_HPP_
#define LATSAMP_ARITH_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

#include "latsamp/wide.hpp"

namespace latsamp {

class UnknownParameterSet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidRoot : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A fixed modulus with its Barrett constants. barrett_k = 2*ceil(log2 q) + 1
// and barrett_mu = floor(2^barrett_k / q).
struct Modulus {
  u64 value = 0;
  unsigned barrett_k = 0;
  u128 barrett_mu = 0;

  static Modulus make(u64 q);
  unsigned bits() const;  // ceil(log2 q)
};

// Reduces x in [0, q^2) to x mod q with at most two correction subtractions.
u64 barrett_reduce(u128 x, const Modulus& m);

inline u64 mod_add(u64 a, u64 b, u64 q) {
  u64 s = a + b;
  return s >= q ? s - q : s;
}
inline u64 mod_sub(u64 a, u64 b, u64 q) { return a >= b ? a - b : a + q - b; }
inline u64 mod_neg(u64 a, u64 q) { return a == 0 ? 0 : q - a; }

inline u64 mod_mul(u64 a, u64 b, const Modulus& m) {
  return barrett_reduce(static_cast<u128>(a) * b, m);
}

u64 mod_pow(u64 base, u64 exp, const Modulus& m);
u64 mod_inv(u64 a, const Modulus& m);  // m.value prime
bool is_prime(u64 n);

// Ring Z_q[x]/(x^n + 1). The transform modulus is q itself when q is a prime
// with q = 1 mod 2n; otherwise it is the smallest such prime p > 2n(q-1)^2, so
// that an exact integer negacyclic product can be recovered and reduced mod q.
// psi and omega live modulo the transform modulus.
struct RingParams {
  std::size_t n = 0;
  Modulus q;
  Modulus ntt_mod;
  u64 psi = 0;
  u64 omega = 0;

  bool transform_is_direct() const { return ntt_mod.value == q.value; }
};

RingParams make_ring_params(std::size_t n, u64 q);

struct GaussianParams {
  double sigma = 0.0;
  unsigned tail_factor = 9;
  unsigned lambda = 64;
  i64 max_value = 0;  // floor(tail_factor * sigma)
};

GaussianParams make_gaussian_params(double sigma, unsigned tail_factor = 9,
                                    unsigned lambda = 64);

struct ParameterSet {
  std::string name;
  RingParams ring;
  GaussianParams gauss;
};

ParameterSet make_parameter_set(const std::string& name, std::size_t n, u64 q,
                                double sigma, unsigned tail_factor = 9,
                                unsigned lambda = 64);

// "LP", "BLISS", or the path of a JSON descriptor
// {"name", "n", "q", "sigma", "tail_factor", "lambda"}.
ParameterSet load_parameter_set(const std::string& name_or_path);

}  // namespace latsamp

#endif  // LATSAMP_ARITH_HPP_
