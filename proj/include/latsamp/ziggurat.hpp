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

#ifndef LATSAMP_ZIGGURAT_HPP_
#define LATSAMP_ZIGGURAT_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "latsamp/alu.hpp"
#include "latsamp/arith.hpp"
#include "latsamp/knuth_yao.hpp"
#include "latsamp/rng.hpp"

namespace latsamp {

class PartitionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct FixedPoint {
  Wide raw;
  unsigned frac_bits = 0;

  double to_double() const;
  friend bool operator==(const FixedPoint&, const FixedPoint&) = default;
};

// Position of a rectangle relative to sigma, fixed per rectangle so the
// sampler tests a stored code instead of comparing against sigma.
enum class SigmaClass : std::uint8_t {
  kConcave = 0,   // floor(x_i) + 1 <= sigma
  kConvex = 1,    // sigma <= floor(x_{i-1})
  kStraddle = 2,  // neither
};

// Rectangles R_1..R_m of equal discrete area (floor(x_i)+1)(y_{i-1} - y_i).
// Index 0 is the top boundary (x_floor[0] = 0, y_bar[0] >= 1); index m is the
// tail cut (x_floor[m] = max_value, y_bar[m] = rho(max_value)).
struct ZigguratTable {
  GaussianParams gauss;
  std::size_t m = 0;
  std::vector<i64> x_floor;       // m + 1
  std::vector<Wide> y_bar_raw;    // m + 1, floor(y_i * 2^lambda)
  std::vector<Wide> slope_k_raw;  // m + 1, index 0 unused
  std::vector<std::uint8_t> slope_defined;  // m + 1, 0 where x_floor repeats
  std::vector<SigmaClass> sigma_class;      // m + 1, index 0 unused
  std::vector<Wide> px_raw;       // max_value + 1

  // Derived: y_bar_raw[i-1] - y_bar_raw[i].
  std::vector<Wide> delta_y_raw;
  unsigned x_bits = 1;  // bit width of max_value

  unsigned lambda() const { return gauss.lambda; }
  // Recomputes the derived fields and checks every table invariant.
  void finalize();
};

// p_x = floor(exp(-x^2 / 2 sigma^2) * 2^lambda) for x in [0, max_value];
// p_0 is stored as 2^lambda - 1.
std::vector<Wide> precompute_px_table(const GaussianParams& gauss);

ZigguratTable build_ziggurat_table(const GaussianParams& gauss, std::size_t m);

// k_i * (x - x_floor[i]) in lambda fractional bits, or -1 when rectangle i
// has x_floor[i-1] == x_floor[i].
FixedPoint s_line(const ZigguratTable& table, std::size_t i, i64 x);

struct ZigSample {
  i64 value = 0;
  u64 attempts = 0;
  u64 bits_used = 0;
};

// One iteration's draws.
struct ZigDraw {
  std::size_t i = 1;
  bool negative = false;
  bool b = false;
  i64 x = 0;
  u128 y_prime = 0;
};

// Accept/reject decision for one draw. Every arithmetic step goes through alu.
bool zig_accept(const ZigguratTable& table, const ZigDraw& draw, SamplerAlu& alu);

ZigSample zig_sample(const ZigguratTable& table, BitSource& src, SamplerAlu& alu,
                     u64 max_rejections = 1000000);
ZigSample zig_sample(const ZigguratTable& table, BitSource& src,
                     u64 max_rejections = 1000000);

// JSON table format; raw fixed-point values are JSON integers when they fit
// in 64 bits and decimal strings otherwise.
void write_ziggurat_json(std::ostream& out, const ZigguratTable& table);
ZigguratTable read_ziggurat_json(std::istream& in);

}  // namespace latsamp

#endif  // LATSAMP_ZIGGURAT_HPP_
