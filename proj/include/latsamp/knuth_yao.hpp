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

#ifndef LATSAMP_KNUTH_YAO_HPP_
#define LATSAMP_KNUTH_YAO_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <vector>

#include "latsamp/alu.hpp"
#include "latsamp/arith.hpp"
#include "latsamp/rng.hpp"

namespace latsamp {

class SamplerStuck : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The walk counter left [-N, hd_sum] with the early-restart check enabled.
class WalkBoundViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DepthOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// N x lambda bit matrix of one-sided probabilities: row i holds the lambda-bit
// truncation of p_0 = rho(0)/S and p_i = 2 rho(i)/S (i >= 1), where
// rho(i) = exp(-i^2 / 2 sigma^2) and S = rho(0) + 2 sum_{i>=1} rho(i).
class ProbabilityMatrix {
 public:
  ProbabilityMatrix(std::size_t rows, unsigned lambda,
                    std::vector<std::uint8_t> bits);

  std::size_t rows() const { return rows_; }
  unsigned lambda() const { return lambda_; }
  bool bit(std::size_t row, unsigned col) const {
    return bits_[row * lambda_ + col] != 0;
  }
  const std::vector<std::uint32_t>& hd() const { return hd_; }
  u64 hd_sum() const { return hd_sum_; }
  unsigned d_width() const { return d_width_; }
  // Rows whose probability was nonzero but truncated to all-zero bits.
  std::size_t underflow_rows() const { return underflow_rows_; }
  void set_underflow_rows(std::size_t n) { underflow_rows_ = n; }

  // Exact value of row i as a dyadic fraction (long double, exact for
  // lambda <= 64).
  long double probability(std::size_t row) const;

  const std::vector<std::uint8_t>& raw_bits() const { return bits_; }

  // Rows holding a one bit in column `col`, ascending.
  const std::vector<std::uint32_t>& column_ones(unsigned col) const {
    return ones_[col];
  }

 private:
  std::size_t rows_;
  unsigned lambda_;
  std::vector<std::uint8_t> bits_;
  std::vector<std::uint32_t> hd_;
  std::vector<std::vector<std::uint32_t>> ones_;
  u64 hd_sum_ = 0;
  unsigned d_width_ = 0;
  std::size_t underflow_rows_ = 0;
};

ProbabilityMatrix build_probability_matrix(const GaussianParams& gauss);

// Test-scale matrices given as probabilities (each truncated to lambda bits).
ProbabilityMatrix matrix_from_probabilities(const std::vector<double>& probs,
                                            unsigned lambda);

struct KySample {
  i64 value = 0;
  u64 bits_used = 0;
};

struct KyOptions {
  bool early_restart = true;  // restart as soon as d > hd_sum
  unsigned max_restarts = 10000;
};

// Counters for the walk-state bound check.
struct KyWalkStats {
  u64 steps = 0;
  i128 min_d = 0;
  i128 max_d = 0;
};

KySample ky_sample(const ProbabilityMatrix& pm, BitSource& src,
                   SamplerAlu& alu, const KyOptions& opts = {},
                   KyWalkStats* stats = nullptr);
KySample ky_sample(const ProbabilityMatrix& pm, BitSource& src,
                   const KyOptions& opts = {}, KyWalkStats* stats = nullptr);

// Exact output distribution (signed value -> probability) by enumerating the
// walk over every bit string of at most max_depth bits. Restarts are folded in
// by conditioning on termination. Only for N <= 8, lambda <= 12.
std::map<i64, long double> ky_sample_exhaustive_check(
    const ProbabilityMatrix& pm, unsigned max_depth);

// Binary table format: "KYPM", N and lambda as u32 LE, N rows of
// ceil(lambda/8) MSB-first bytes, lambda u32 hd values, u64 hd_sum.
void write_kypm(std::ostream& out, const ProbabilityMatrix& pm);
ProbabilityMatrix read_kypm(std::istream& in);

}  // namespace latsamp

#endif  // LATSAMP_KNUTH_YAO_HPP_
