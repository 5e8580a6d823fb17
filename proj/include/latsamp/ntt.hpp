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

#ifndef LATSAMP_NTT_HPP_
#define LATSAMP_NTT_HPP_

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "latsamp/arith.hpp"

namespace latsamp {

// Coefficient vector of an element of Z_m[x]/(x^n + 1). The modulus is the
// coefficient modulus q in the algebraic domain and the transform modulus in
// the NTT domain (they coincide for NTT-friendly q).
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::size_t n, u64 modulus) : coeffs_(n, 0), modulus_(modulus) {}
  Polynomial(std::vector<u64> coeffs, u64 modulus);

  static Polynomial monomial(std::size_t n, u64 modulus, std::size_t degree,
                             u64 coeff = 1);

  std::size_t size() const { return coeffs_.size(); }
  u64 modulus() const { return modulus_; }
  u64 operator[](std::size_t i) const { return coeffs_[i]; }
  void set(std::size_t i, u64 v);
  const std::vector<u64>& coeffs() const { return coeffs_; }

  // Coefficient lifted to (-q/2, q/2].
  i64 centered(std::size_t i) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<u64> coeffs_;
  u64 modulus_ = 0;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);

// Reads/writes the text format: header "n=<n> q=<q>", then one decimal
// coefficient per line.
Polynomial read_polynomial(std::istream& in);
void write_polynomial(std::ostream& out, const Polynomial& p);

// Returns (u + w*v, u - w*v) mod m.
std::pair<u64, u64> butterfly(u64 u, u64 v, u64 w, const Modulus& m);

class NttPlan {
 public:
  explicit NttPlan(const RingParams& params);

  const RingParams& params() const { return params_; }
  std::size_t stages() const { return stages_; }
  const std::vector<u64>& twiddles() const { return twiddles_; }

  // psi-prescale, then Cooley-Tukey (natural order in, bit-reversed out).
  Polynomial forward(const Polynomial& p) const;
  // Gentleman-Sande (bit-reversed in, natural out), scale by n^-1, post-scale
  // by psi^-i.
  Polynomial inverse(const Polynomial& p) const;

  Polynomial multiply(const Polynomial& a, const Polynomial& b) const;

  // Butterflies executed by one forward or inverse transform.
  std::size_t butterflies_per_transform() const {
    return stages_ * params_.n / 2;
  }

 private:
  void check_input(const Polynomial& p, u64 modulus) const;

  RingParams params_;
  std::size_t stages_ = 0;
  std::vector<u64> twiddles_;      // index 1..n-1, forward
  std::vector<u64> inv_twiddles_;  // index 1..n-1, inverse of twiddles_
  std::vector<u64> psi_powers_;
  std::vector<u64> inv_psi_powers_;
  u64 n_inv_ = 0;
};

inline Polynomial forward_ntt(const Polynomial& p, const NttPlan& plan) {
  return plan.forward(p);
}
inline Polynomial inverse_ntt(const Polynomial& p, const NttPlan& plan) {
  return plan.inverse(p);
}
inline Polynomial poly_mul(const Polynomial& a, const Polynomial& b,
                           const NttPlan& plan) {
  return plan.multiply(a, b);
}

// O(n^2) reference product modulo (x^n + 1, q).
Polynomial schoolbook_negacyclic(const Polynomial& a, const Polynomial& b);

std::size_t bit_reverse(std::size_t v, std::size_t bits);

}  // namespace latsamp

#endif  // LATSAMP_NTT_HPP_
