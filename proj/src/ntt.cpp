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

#include "latsamp/ntt.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace latsamp {

Polynomial::Polynomial(std::vector<u64> coeffs, u64 modulus)
    : coeffs_(std::move(coeffs)), modulus_(modulus) {
  for (u64 c : coeffs_) {
    if (c >= modulus_) throw std::invalid_argument("coefficient not reduced");
  }
}

Polynomial Polynomial::monomial(std::size_t n, u64 modulus, std::size_t degree,
                                u64 coeff) {
  Polynomial p(n, modulus);
  p.set(degree, coeff);
  return p;
}

void Polynomial::set(std::size_t i, u64 v) {
  if (v >= modulus_) throw std::invalid_argument("coefficient not reduced");
  coeffs_.at(i) = v;
}

i64 Polynomial::centered(std::size_t i) const {
  u64 c = coeffs_[i];
  return c > modulus_ / 2 ? static_cast<i64>(c) - static_cast<i64>(modulus_)
                          : static_cast<i64>(c);
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.size() != b.size() || a.modulus() != b.modulus()) {
    throw std::invalid_argument("polynomial shape mismatch");
  }
  std::vector<u64> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = mod_add(a[i], b[i], a.modulus());
  return Polynomial(std::move(c), a.modulus());
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  if (a.size() != b.size() || a.modulus() != b.modulus()) {
    throw std::invalid_argument("polynomial shape mismatch");
  }
  std::vector<u64> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = mod_sub(a[i], b[i], a.modulus());
  return Polynomial(std::move(c), a.modulus());
}

Polynomial read_polynomial(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty polynomial file");
  std::size_t n = 0;
  u64 q = 0;
  if (std::sscanf(header.c_str(), "n=%zu q=%lu", &n, &q) != 2 || n == 0 || q < 2) {
    throw std::runtime_error("bad polynomial header: " + header);
  }
  std::vector<u64> c;
  c.reserve(n);
  u64 v = 0;
  while (c.size() < n && in >> v) c.push_back(v);
  if (c.size() != n) throw std::runtime_error("polynomial file truncated");
  return Polynomial(std::move(c), q);
}

void write_polynomial(std::ostream& out, const Polynomial& p) {
  out << "n=" << p.size() << " q=" << p.modulus() << "\n";
  for (u64 c : p.coeffs()) out << c << "\n";
}

std::pair<u64, u64> butterfly(u64 u, u64 v, u64 w, const Modulus& m) {
  u64 t = mod_mul(w, v, m);
  return {mod_add(u, t, m.value), mod_sub(u, t, m.value)};
}

std::size_t bit_reverse(std::size_t v, std::size_t bits) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < bits; ++i) {
    r = (r << 1) | ((v >> i) & 1);
  }
  return r;
}

NttPlan::NttPlan(const RingParams& params) : params_(params) {
  const std::size_t n = params.n;
  const Modulus& p = params.ntt_mod;
  while ((std::size_t{1} << stages_) < n) ++stages_;

  // Stage s has 2^s groups; group g uses omega^(bitrev_s(g) * n / 2^(s+1)).
  twiddles_.assign(n, 0);
  inv_twiddles_.assign(n, 0);
  const u64 omega_inv = mod_inv(params.omega, p);
  for (std::size_t s = 0; s < stages_; ++s) {
    const std::size_t groups = std::size_t{1} << s;
    const std::size_t len = n >> (s + 1);
    for (std::size_t g = 0; g < groups; ++g) {
      u64 e = static_cast<u64>(bit_reverse(g, s) * len);
      twiddles_[groups + g] = mod_pow(params.omega, e, p);
      inv_twiddles_[groups + g] = mod_pow(omega_inv, e, p);
    }
  }

  psi_powers_.resize(n);
  inv_psi_powers_.resize(n);
  const u64 psi_inv = mod_inv(params.psi, p);
  u64 a = 1, b = 1;
  for (std::size_t i = 0; i < n; ++i) {
    psi_powers_[i] = a;
    inv_psi_powers_[i] = b;
    a = mod_mul(a, params.psi, p);
    b = mod_mul(b, psi_inv, p);
  }
  n_inv_ = mod_inv(static_cast<u64>(n) % p.value, p);
}

void NttPlan::check_input(const Polynomial& poly, u64 modulus) const {
  if (poly.size() != params_.n || poly.modulus() != modulus) {
    throw std::invalid_argument("polynomial does not match the NTT plan");
  }
}

Polynomial NttPlan::forward(const Polynomial& poly) const {
  const Modulus& p = params_.ntt_mod;
  const std::size_t n = params_.n;
  // Algebraic-domain input modulo q; values below q are valid mod p too.
  check_input(poly, params_.q.value);
  std::vector<u64> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = mod_mul(poly[i], psi_powers_[i], p);

  std::size_t k = 1;
  for (std::size_t len = n / 2; len >= 1; len >>= 1) {
    for (std::size_t start = 0; start < n; start += 2 * len) {
      const u64 w = twiddles_[k++];
      for (std::size_t j = start; j < start + len; ++j) {
        auto [x, y] = butterfly(a[j], a[j + len], w, p);
        a[j] = x;
        a[j + len] = y;
      }
    }
  }
  return Polynomial(std::move(a), p.value);
}

Polynomial NttPlan::inverse(const Polynomial& poly) const {
  const Modulus& p = params_.ntt_mod;
  const std::size_t n = params_.n;
  check_input(poly, p.value);
  std::vector<u64> a = poly.coeffs();

  for (std::size_t len = 1; len < n; len <<= 1) {
    const std::size_t groups = n / (2 * len);
    std::size_t k = groups;
    for (std::size_t start = 0; start < n; start += 2 * len) {
      const u64 w = inv_twiddles_[k++];
      for (std::size_t j = start; j < start + len; ++j) {
        u64 u = a[j], v = a[j + len];
        a[j] = mod_add(u, v, p.value);
        a[j + len] = mod_mul(mod_sub(u, v, p.value), w, p);
      }
    }
  }

  const u64 q = params_.q.value;
  std::vector<u64> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    u64 c = mod_mul(mod_mul(a[i], n_inv_, p), inv_psi_powers_[i], p);
    if (params_.transform_is_direct()) {
      out[i] = c;
    } else {
      // Centered lift of the exact integer coefficient, then reduce mod q.
      i64 lifted = c > p.value / 2 ? static_cast<i64>(c) - static_cast<i64>(p.value)
                                   : static_cast<i64>(c);
      i64 r = lifted % static_cast<i64>(q);
      out[i] = static_cast<u64>(r < 0 ? r + static_cast<i64>(q) : r);
    }
  }
  return Polynomial(std::move(out), q);
}

Polynomial NttPlan::multiply(const Polynomial& a, const Polynomial& b) const {
  const Modulus& p = params_.ntt_mod;
  Polynomial fa = forward(a);
  Polynomial fb = forward(b);
  std::vector<u64> c(params_.n);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = mod_mul(fa[i], fb[i], p);
  return inverse(Polynomial(std::move(c), p.value));
}

Polynomial schoolbook_negacyclic(const Polynomial& a, const Polynomial& b) {
  if (a.size() != b.size() || a.modulus() != b.modulus()) {
    throw std::invalid_argument("polynomial shape mismatch");
  }
  const std::size_t n = a.size();
  const u64 q = a.modulus();
  std::vector<u64> c(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      u64 prod = static_cast<u64>(static_cast<u128>(a[i]) * b[j] % q);
      std::size_t k = i + j;
      if (k < n) {
        c[k] = mod_add(c[k], prod, q);
      } else {
        c[k - n] = mod_sub(c[k - n], prod, q);
      }
    }
  }
  return Polynomial(std::move(c), q);
}

}  // namespace latsamp
