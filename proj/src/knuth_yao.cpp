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

#include "latsamp/knuth_yao.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace latsamp {

ProbabilityMatrix::ProbabilityMatrix(std::size_t rows, unsigned lambda,
                                     std::vector<std::uint8_t> bits)
    : rows_(rows),
      lambda_(lambda),
      bits_(std::move(bits)),
      hd_(lambda, 0),
      ones_(lambda) {
  if (rows_ == 0 || lambda_ == 0 || lambda_ > 128 ||
      bits_.size() != rows_ * lambda_) {
    throw std::invalid_argument("malformed probability matrix");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    for (unsigned c = 0; c < lambda_; ++c) {
      if (bit(r, c)) {
        ++hd_[c];
        ones_[c].push_back(static_cast<std::uint32_t>(r));
      }
    }
  }
  for (auto h : hd_) hd_sum_ += h;
  // ceil(log2 hd_sum) + 1
  unsigned lg = 0;
  while ((u64{1} << lg) < hd_sum_) ++lg;
  d_width_ = lg + 1;
}

long double ProbabilityMatrix::probability(std::size_t row) const {
  long double p = 0.0L;
  long double w = 0.5L;
  for (unsigned c = 0; c < lambda_; ++c, w /= 2) {
    if (bit(row, c)) p += w;
  }
  return p;
}

namespace {

void append_truncated_bits(HighFloat p, unsigned lambda,
                           std::vector<std::uint8_t>& bits) {
  for (unsigned c = 0; c < lambda; ++c) {
    p *= 2;
    if (p >= 1) {
      bits.push_back(1);
      p -= 1;
    } else {
      bits.push_back(0);
    }
  }
}

}  // namespace

ProbabilityMatrix build_probability_matrix(const GaussianParams& gauss) {
  const std::size_t rows = static_cast<std::size_t>(gauss.max_value) + 1;
  const HighFloat sigma(gauss.sigma);
  const HighFloat two_sigma_sq = 2 * sigma * sigma;
  std::vector<HighFloat> rho(rows);
  HighFloat total = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    HighFloat x(i);
    rho[i] = exp(-(x * x) / two_sigma_sq);
    total += i == 0 ? rho[i] : 2 * rho[i];
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(rows * gauss.lambda);
  std::size_t underflow = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    HighFloat p = (i == 0 ? rho[i] : 2 * rho[i]) / total;
    std::size_t before = bits.size();
    append_truncated_bits(p, gauss.lambda, bits);
    bool all_zero = true;
    for (std::size_t k = before; k < bits.size(); ++k) all_zero &= bits[k] == 0;
    if (all_zero && p > 0) ++underflow;
  }
  ProbabilityMatrix pm(rows, gauss.lambda, std::move(bits));
  pm.set_underflow_rows(underflow);
  return pm;
}

ProbabilityMatrix matrix_from_probabilities(const std::vector<double>& probs,
                                            unsigned lambda) {
  std::vector<std::uint8_t> bits;
  for (double p : probs) {
    if (p < 0 || p > 1) throw std::invalid_argument("probability out of range");
    append_truncated_bits(HighFloat(p), lambda, bits);
  }
  return ProbabilityMatrix(probs.size(), lambda, std::move(bits));
}

namespace {

void check_bound(const ProbabilityMatrix& pm, i128 d, KyWalkStats* stats) {
  if (stats != nullptr) {
    ++stats->steps;
    if (d < stats->min_d) stats->min_d = d;
    if (d > stats->max_d) stats->max_d = d;
  }
  if (d < -static_cast<i128>(pm.rows()) || d > static_cast<i128>(pm.hd_sum())) {
    throw WalkBoundViolation("Knuth-Yao counter left [-N, hd_sum]");
  }
}

}  // namespace

KySample ky_sample(const ProbabilityMatrix& pm, BitSource& src, SamplerAlu& alu,
                   const KyOptions& opts, KyWalkStats* stats) {
  const u64 start_bits = src.bits_consumed();
  const auto& hd = pm.hd();
  const i128 hd_sum = static_cast<i128>(pm.hd_sum());
  // One guard bit over d_width: 2d + 1 - hd[col] may exceed hd_sum by up to
  // hd_sum + 1 before the restart comparison fires.
  const unsigned update_width = pm.d_width() + 1;
  const unsigned scan_width = pm.d_width();
  NativeAlu* native = dynamic_cast<NativeAlu*>(&alu);

  for (unsigned restart = 0; restart <= opts.max_restarts; ++restart) {
    i128 d = 0;
    for (unsigned col = 0; col < pm.lambda(); ++col) {
      const unsigned not_r = src.next_bit() ? 0u : 1u;
      // 2d is a wire shift; the +1 enters as the adder's carry-in.
      d = alu.add(2 * d, -static_cast<i128>(hd[col]), not_r, update_width);
      if (d < 0) {
        // Sign bit of the two's-complement register: scan the column.
        std::size_t row = 0;
        if (native != nullptr) {
          const auto& ones = pm.column_ones(col);
          const auto idx = static_cast<std::size_t>(-d - 1);
          if (idx >= ones.size()) throw WalkBoundViolation("column scan overran");
          row = ones[idx];
          if (opts.early_restart) check_bound(pm, d, stats);
          native->add_ops += row + 1;
          d = 0;
        } else {
          bool found = false;
          for (row = 0; row < pm.rows(); ++row) {
            if (opts.early_restart) check_bound(pm, d, stats);
            d = alu.add(d, pm.bit(row, col) ? 1 : 0, 0, scan_width);
            if (d == 0) {
              found = true;
              break;
            }
          }
          if (!found) throw WalkBoundViolation("column scan overran");
        }
        const bool negative = src.next_bit();
        KySample s;
        s.value = negative ? -static_cast<i64>(row) : static_cast<i64>(row);
        s.bits_used = src.bits_consumed() - start_bits;
        return s;
      }
      if (opts.early_restart) {
        if (d > hd_sum) break;
        check_bound(pm, d, stats);
      }
    }
  }
  throw SamplerStuck("Knuth-Yao walk exceeded the restart cap");
}

KySample ky_sample(const ProbabilityMatrix& pm, BitSource& src,
                   const KyOptions& opts, KyWalkStats* stats) {
  NativeAlu alu;
  return ky_sample(pm, src, alu, opts, stats);
}

namespace {

struct Enumeration {
  const ProbabilityMatrix& pm;
  unsigned max_depth;
  std::map<i64, long double> terminal;
  long double restart_mass = 0;
  long double unresolved_mass = 0;

  void walk(unsigned col, i128 d, unsigned depth, long double weight) {
    if (col == pm.lambda()) {
      restart_mass += weight;
      return;
    }
    if (depth >= max_depth) {
      unresolved_mass += weight;
      return;
    }
    for (unsigned r = 0; r < 2; ++r) {
      const long double w = weight / 2;
      i128 nd = 2 * d + (r == 0 ? 1 : 0) - static_cast<i128>(pm.hd()[col]);
      if (nd < 0) {
        std::size_t row = 0;
        for (; row < pm.rows(); ++row) {
          nd += pm.bit(row, col) ? 1 : 0;
          if (nd == 0) break;
        }
        if (depth + 1 >= max_depth) {
          unresolved_mass += w;
          continue;
        }
        terminal[static_cast<i64>(row)] += w / 2;
        terminal[-static_cast<i64>(row)] += w / 2;
      } else if (nd > static_cast<i128>(pm.hd_sum())) {
        restart_mass += w;
      } else {
        walk(col + 1, nd, depth + 1, w);
      }
    }
  }
};

}  // namespace

std::map<i64, long double> ky_sample_exhaustive_check(const ProbabilityMatrix& pm,
                                                      unsigned max_depth) {
  if (pm.rows() > 8 || pm.lambda() > 12) {
    throw std::invalid_argument("exhaustive check limited to N <= 8, lambda <= 12");
  }
  Enumeration e{pm, max_depth, {}, 0, 0};
  e.walk(0, 0, 0, 1.0L);
  if (e.unresolved_mass > 0) {
    throw DepthOverflow("walk does not resolve within " +
                        std::to_string(max_depth) + " bits");
  }
  long double done = 0;
  for (const auto& [v, p] : e.terminal) done += p;
  if (done <= 0) throw DepthOverflow("matrix has no terminating paths");
  for (auto& [v, p] : e.terminal) p /= done;
  return e.terminal;
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::ostream& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    int c = in.get();
    if (c == EOF) throw std::runtime_error("KYPM file truncated");
    v |= static_cast<std::uint64_t>(c & 0xff) << (8 * i);
  }
  return v;
}

}  // namespace

void write_kypm(std::ostream& out, const ProbabilityMatrix& pm) {
  out.write("KYPM", 4);
  put_u32(out, static_cast<std::uint32_t>(pm.rows()));
  put_u32(out, pm.lambda());
  const unsigned row_bytes = (pm.lambda() + 7) / 8;
  for (std::size_t r = 0; r < pm.rows(); ++r) {
    for (unsigned b = 0; b < row_bytes; ++b) {
      unsigned byte = 0;
      for (unsigned k = 0; k < 8; ++k) {
        unsigned c = b * 8 + k;
        byte = (byte << 1) | (c < pm.lambda() && pm.bit(r, c) ? 1u : 0u);
      }
      out.put(static_cast<char>(byte));
    }
  }
  for (auto h : pm.hd()) put_u32(out, h);
  put_u64(out, pm.hd_sum());
}

ProbabilityMatrix read_kypm(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != "KYPM") {
    throw std::runtime_error("not a KYPM table");
  }
  const auto rows = static_cast<std::size_t>(get_le(in, 4));
  const auto lambda = static_cast<unsigned>(get_le(in, 4));
  if (rows == 0 || rows > (1u << 24) || lambda == 0 || lambda > 128) {
    throw std::runtime_error("KYPM header out of range");
  }
  const unsigned row_bytes = (lambda + 7) / 8;
  std::vector<std::uint8_t> bits;
  bits.reserve(rows * lambda);
  for (std::size_t r = 0; r < rows; ++r) {
    for (unsigned b = 0; b < row_bytes; ++b) {
      auto byte = static_cast<unsigned>(get_le(in, 1));
      for (unsigned k = 0; k < 8; ++k) {
        if (b * 8 + k < lambda) bits.push_back((byte >> (7 - k)) & 1u);
      }
    }
  }
  ProbabilityMatrix pm(rows, lambda, std::move(bits));
  for (unsigned c = 0; c < lambda; ++c) {
    if (get_le(in, 4) != pm.hd()[c]) throw std::runtime_error("KYPM hd mismatch");
  }
  if (get_le(in, 8) != pm.hd_sum()) throw std::runtime_error("KYPM hd_sum mismatch");
  return pm;
}

}  // namespace latsamp
