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

#include "latsamp/ziggurat.hpp"

#include <string>

namespace latsamp {

double FixedPoint::to_double() const {
  return static_cast<double>(raw) / std::ldexp(1.0, static_cast<int>(frac_bits));
}

namespace {

HighFloat density(const HighFloat& x, const HighFloat& sigma) {
  return exp(-(x * x) / (2 * sigma * sigma));
}

Wide floor_scaled(const HighFloat& v, unsigned lambda) {
  HighFloat scaled = ldexp(v, static_cast<int>(lambda));
  return floor(scaled).convert_to<Wide>();
}

// Truncating division toward zero.
Wide div_trunc(const Wide& num, const Wide& den) { return num / den; }

struct Partition {
  bool valid = false;   // every intermediate y stayed below 1
  bool covers = false;  // y_0 >= 1
  std::vector<HighFloat> y;
  std::vector<i64> xf;
};

Partition stack_rectangles(const HighFloat& area, const GaussianParams& gauss,
                           std::size_t m) {
  const HighFloat sigma(gauss.sigma);
  Partition p;
  p.y.assign(m + 1, HighFloat(0));
  p.xf.assign(m + 1, 0);
  p.xf[m] = gauss.max_value;
  p.y[m] = density(HighFloat(gauss.max_value), sigma);
  for (std::size_t i = m; i >= 1; --i) {
    p.y[i - 1] = p.y[i] + area / HighFloat(p.xf[i] + 1);
    if (i - 1 >= 1) {
      if (p.y[i - 1] >= 1) return p;
      HighFloat x = sqrt(-2 * sigma * sigma * log(p.y[i - 1]));
      p.xf[i - 1] = floor(x).convert_to<i64>();
    }
  }
  p.xf[0] = 0;
  p.valid = true;
  p.covers = p.y[0] >= 1;
  return p;
}

}  // namespace

std::vector<Wide> precompute_px_table(const GaussianParams& gauss) {
  const HighFloat sigma(gauss.sigma);
  std::vector<Wide> px(static_cast<std::size_t>(gauss.max_value) + 1);
  px[0] = pow2(gauss.lambda) - 1;
  for (std::size_t x = 1; x < px.size(); ++x) {
    px[x] = floor_scaled(density(HighFloat(x), sigma), gauss.lambda);
  }
  return px;
}

ZigguratTable build_ziggurat_table(const GaussianParams& gauss, std::size_t m) {
  if (m < 2) throw std::invalid_argument("need at least two rectangles");
  if (gauss.max_value < 1) {
    throw PartitionFailure("tail cut leaves no room for a partition");
  }
  // Smallest common area whose stack reaches y_0 >= 1.
  HighFloat lo = 0;
  HighFloat hi = HighFloat(gauss.max_value + 1);
  if (!stack_rectangles(hi, gauss, m).covers &&
      stack_rectangles(hi, gauss, m).valid) {
    throw PartitionFailure("upper area bound does not cover the density");
  }
  int iter = 0;
  for (; iter < 200; ++iter) {
    HighFloat mid = (lo + hi) / 2;
    Partition p = stack_rectangles(mid, gauss, m);
    if (!p.valid || p.covers) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  Partition best = stack_rectangles(hi, gauss, m);
  if (!best.valid || !best.covers || (hi - lo) > ldexp(hi, -150)) {
    throw PartitionFailure("rectangle partition did not converge");
  }

  ZigguratTable t;
  t.gauss = gauss;
  t.m = m;
  t.x_floor = best.xf;
  t.y_bar_raw.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    t.y_bar_raw[i] = floor_scaled(best.y[i], gauss.lambda);
  }
  t.px_raw = precompute_px_table(gauss);
  t.slope_k_raw.assign(m + 1, Wide(0));
  t.slope_defined.assign(m + 1, 0);
  t.sigma_class.assign(m + 1, SigmaClass::kStraddle);
  const Wide one = pow2(gauss.lambda);
  for (std::size_t i = 1; i <= m; ++i) {
    const i64 dx = t.x_floor[i] - t.x_floor[i - 1];
    if (dx != 0) {
      const Wide y_prev = i == 1 ? one : t.y_bar_raw[i - 1];
      t.slope_k_raw[i] = div_trunc(t.y_bar_raw[i] - y_prev, Wide(dx));
      t.slope_defined[i] = 1;
    }
    if (static_cast<double>(t.x_floor[i] + 1) <= gauss.sigma) {
      t.sigma_class[i] = SigmaClass::kConcave;
    } else if (gauss.sigma <= static_cast<double>(t.x_floor[i - 1])) {
      t.sigma_class[i] = SigmaClass::kConvex;
    }
  }
  t.finalize();
  return t;
}

void ZigguratTable::finalize() {
  if (m < 2 || x_floor.size() != m + 1 || y_bar_raw.size() != m + 1 ||
      slope_k_raw.size() != m + 1 || slope_defined.size() != m + 1 ||
      sigma_class.size() != m + 1) {
    throw std::invalid_argument("Ziggurat table arrays have inconsistent sizes");
  }
  if (x_floor[0] != 0) throw std::invalid_argument("x_floor[0] must be 0");
  for (std::size_t i = 1; i <= m; ++i) {
    if (x_floor[i] < x_floor[i - 1]) {
      throw std::invalid_argument("x_floor must be non-decreasing");
    }
    if (!(y_bar_raw[i] < y_bar_raw[i - 1])) {
      throw std::invalid_argument("y_bar must be strictly decreasing");
    }
    if ((slope_defined[i] != 0) != (x_floor[i] != x_floor[i - 1])) {
      throw std::invalid_argument("slope flag disagrees with x_floor");
    }
    SigmaClass expect = SigmaClass::kStraddle;
    if (static_cast<double>(x_floor[i] + 1) <= gauss.sigma) {
      expect = SigmaClass::kConcave;
    } else if (gauss.sigma <= static_cast<double>(x_floor[i - 1])) {
      expect = SigmaClass::kConvex;
    }
    if (sigma_class[i] != expect) {
      throw std::invalid_argument("sigma_class disagrees with x_floor");
    }
  }
  if (x_floor[m] != gauss.max_value ||
      px_raw.size() != static_cast<std::size_t>(gauss.max_value) + 1) {
    throw std::invalid_argument("table does not end at the tail cut");
  }
  if (y_bar_raw[m] < 0) throw std::invalid_argument("negative y_bar");
  delta_y_raw.assign(m + 1, Wide(0));
  for (std::size_t i = 1; i <= m; ++i) delta_y_raw[i] = y_bar_raw[i - 1] - y_bar_raw[i];
  x_bits = bit_width(static_cast<u128>(gauss.max_value));
}

FixedPoint s_line(const ZigguratTable& table, std::size_t i, i64 x) {
  if (i < 1 || i > table.m || x < 0 || x > table.x_floor[i]) {
    throw IndexOutOfRange("s_line index out of range");
  }
  if (table.slope_defined[i] == 0) return FixedPoint{-pow2(table.lambda()), table.lambda()};
  return FixedPoint{table.slope_k_raw[i] * (x - table.x_floor[i]), table.lambda()};
}

bool zig_accept(const ZigguratTable& table, const ZigDraw& d, SamplerAlu& alu) {
  const std::size_t i = d.i;
  const unsigned lambda = table.lambda();
  if (d.x > 0 && d.x <= table.x_floor[i - 1]) return true;
  if (d.x == 0 && d.b) return false;

  // ybar = y' * (ybar_{i-1} - ybar_i), both sides of each test scaled by 2^lambda.
  const Wide ybar = alu.mul_wide(d.y_prime, table.delta_y_raw[i], lambda, lambda + 1);
  const Wide curve_gap =
      alu.add_wide(table.px_raw[static_cast<std::size_t>(d.x)], -table.y_bar_raw[i],
                   lambda + 2);
  const bool under_curve = ybar <= (curve_gap << lambda);

  bool under_line = false;
  if (table.sigma_class[i] == SigmaClass::kConcave && table.slope_defined[i] != 0) {
    // sLine: |k_i| * (x_floor[i] - x); the chord sits below the density here.
    const i128 dx = alu.add(table.x_floor[i], -static_cast<i128>(d.x), 0,
                            table.x_bits + 1);
    const Wide k_mag = -table.slope_k_raw[i];
    const Wide y_s = alu.mul_small(static_cast<u128>(k_mag), static_cast<u64>(dx),
                                   lambda, table.x_bits);
    under_line = ybar <= (y_s << lambda);
  }
  return under_line || under_curve;
}

ZigSample zig_sample(const ZigguratTable& table, BitSource& src, SamplerAlu& alu,
                     u64 max_rejections) {
  const u64 start_bits = src.bits_consumed();
  ZigDraw d;
  for (u64 attempt = 1; attempt <= max_rejections; ++attempt) {
    d.i = 1 + static_cast<std::size_t>(src.uniform_below(table.m - 1));
    d.negative = src.next_bit();
    d.b = src.next_bit();
    d.x = static_cast<i64>(src.uniform_below(static_cast<u128>(table.x_floor[d.i])));
    d.y_prime = src.next_bits(table.lambda());
    if (zig_accept(table, d, alu)) {
      ZigSample s;
      s.value = d.negative ? -d.x : d.x;
      s.attempts = attempt;
      s.bits_used = src.bits_consumed() - start_bits;
      return s;
    }
  }
  throw SamplerStuck("Ziggurat rejection loop exceeded its cap");
}

ZigSample zig_sample(const ZigguratTable& table, BitSource& src,
                     u64 max_rejections) {
  NativeAlu alu;
  return zig_sample(table, src, alu, max_rejections);
}

}  // namespace latsamp
