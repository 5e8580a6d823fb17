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

#include "latsamp/arith.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "json.hpp"

namespace latsamp {

unsigned Modulus::bits() const {
  unsigned b = 0;
  while ((u64{1} << b) < value) ++b;
  return b;
}

Modulus Modulus::make(u64 q) {
  if (q < 2 || q >= (u64{1} << 40)) {
    throw InvalidParameters("modulus must lie in [2, 2^40)");
  }
  Modulus m;
  m.value = q;
  m.barrett_k = 2 * m.bits() + 1;
  m.barrett_mu = (static_cast<u128>(1) << m.barrett_k) / q;
  return m;
}

u64 barrett_reduce(u128 x, const Modulus& m) {
  u128 estimate = (x * m.barrett_mu) >> m.barrett_k;
  u128 t = x - estimate * m.value;
  if (t >= m.value) t -= m.value;
  if (t >= m.value) t -= m.value;
  return static_cast<u64>(t);
}

u64 mod_pow(u64 base, u64 exp, const Modulus& m) {
  u64 result = 1 % m.value;
  base %= m.value;
  while (exp != 0) {
    if (exp & 1) result = mod_mul(result, base, m);
    base = mod_mul(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 mod_inv(u64 a, const Modulus& m) { return mod_pow(a, m.value - 2, m); }

namespace {

u64 mulmod64(u64 a, u64 b, u64 n) {
  return static_cast<u64>(static_cast<u128>(a) * b % n);
}

u64 powmod64(u64 b, u64 e, u64 n) {
  u64 r = 1 % n;
  b %= n;
  while (e != 0) {
    if (e & 1) r = mulmod64(r, b, n);
    b = mulmod64(b, b, n);
    e >>= 1;
  }
  return r;
}

// Smallest primitive 2n-th root of unity modulo the prime p.
u64 find_psi(std::size_t n, const Modulus& p) {
  const u64 order = 2 * static_cast<u64>(n);
  if ((p.value - 1) % order != 0) {
    throw InvalidRoot("no primitive 2n-th root of unity modulo " +
                      std::to_string(p.value));
  }
  const u64 cofactor = (p.value - 1) / order;
  for (u64 g = 2; g < p.value && g < 100000; ++g) {
    u64 cand = mod_pow(g, cofactor, p);
    if (mod_pow(cand, n, p) != p.value - 1) continue;
    // Every primitive 2n-th root is an odd power of cand.
    u64 best = cand;
    u64 sq = mod_mul(cand, cand, p);
    u64 cur = cand;
    for (u64 j = 1; j < n; ++j) {
      cur = mod_mul(cur, sq, p);
      if (cur < best) best = cur;
    }
    return best;
  }
  throw InvalidRoot("primitive root search failed modulo " +
                    std::to_string(p.value));
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    u64 x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

RingParams make_ring_params(std::size_t n, u64 q) {
  if (n < 4 || (n & (n - 1)) != 0) {
    throw InvalidParameters("ring dimension must be a power of two >= 4");
  }
  RingParams rp;
  rp.n = n;
  rp.q = Modulus::make(q);
  const u64 order = 2 * static_cast<u64>(n);
  if (is_prime(q) && (q - 1) % order == 0) {
    rp.ntt_mod = rp.q;
  } else {
    // Exact integer convolution: coefficients lie in (-n(q-1)^2, n(q-1)^2).
    u128 bound = static_cast<u128>(2) * n * (q - 1) * (q - 1);
    u128 p = (bound / order + 1) * order + 1;
    while (!is_prime(static_cast<u64>(p))) p += order;
    rp.ntt_mod = Modulus::make(static_cast<u64>(p));
  }
  rp.psi = find_psi(n, rp.ntt_mod);
  rp.omega = mod_mul(rp.psi, rp.psi, rp.ntt_mod);
  if (mod_pow(rp.psi, n, rp.ntt_mod) != rp.ntt_mod.value - 1 ||
      mod_pow(rp.psi, order, rp.ntt_mod) != 1) {
    throw InvalidRoot("psi fails the primitivity check");
  }
  return rp;
}

GaussianParams make_gaussian_params(double sigma, unsigned tail_factor,
                                    unsigned lambda) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidParameters("sigma must be positive");
  }
  if (lambda < 8 || lambda > 128) {
    throw InvalidParameters("lambda must lie in [8, 128]");
  }
  if (tail_factor == 0) throw InvalidParameters("tail_factor must be >= 1");
  GaussianParams g;
  g.sigma = sigma;
  g.tail_factor = tail_factor;
  g.lambda = lambda;
  g.max_value = static_cast<i64>(std::floor(tail_factor * sigma));
  return g;
}

ParameterSet make_parameter_set(const std::string& name, std::size_t n, u64 q,
                                double sigma, unsigned tail_factor,
                                unsigned lambda) {
  return ParameterSet{name, make_ring_params(n, q),
                      make_gaussian_params(sigma, tail_factor, lambda)};
}

ParameterSet load_parameter_set(const std::string& name_or_path) {
  if (name_or_path == "LP") return make_parameter_set("LP", 256, 4093, 3.33);
  if (name_or_path == "BLISS") {
    return make_parameter_set("BLISS", 512, 12289, 215.73);
  }
  std::ifstream in(name_or_path);
  if (!in) throw UnknownParameterSet("unknown parameter set: " + name_or_path);
  nlohmann::json j;
  try {
    in >> j;
    return make_parameter_set(j.at("name").get<std::string>(),
                              j.at("n").get<std::size_t>(), j.at("q").get<u64>(),
                              j.at("sigma").get<double>(),
                              j.value("tail_factor", 9u), j.value("lambda", 64u));
  } catch (const nlohmann::json::exception& e) {
    throw UnknownParameterSet("malformed parameter descriptor " + name_or_path +
                              ": " + e.what());
  }
}

}  // namespace latsamp
