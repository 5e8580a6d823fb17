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

#ifndef LATSAMP_STATS_HPP_
#define LATSAMP_STATS_HPP_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "latsamp/wide.hpp"

namespace latsamp {

class EmptyHistogram : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class InsufficientBins : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Counts over [-max_value, max_value].
class EmpiricalHistogram {
 public:
  explicit EmpiricalHistogram(i64 max_value);
  EmpiricalHistogram(i64 max_value, std::span<const i64> samples);

  void add(i64 v, u64 times = 1);
  void merge(const EmpiricalHistogram& other);

  i64 max_value() const { return max_value_; }
  u64 count(i64 v) const { return counts_.at(static_cast<std::size_t>(v + max_value_)); }
  u64 total() const { return total_; }
  const std::vector<u64>& counts() const { return counts_; }

 private:
  i64 max_value_;
  std::vector<u64> counts_;
  u64 total_ = 0;
};

// exp(-x^2 / 2 sigma^2) normalized over [-max_value, max_value], 256-bit mantissa.
class TargetDistribution {
 public:
  TargetDistribution(double sigma, i64 max_value);

  i64 max_value() const { return max_value_; }
  double sigma() const { return sigma_; }
  const HighFloat& exact(i64 v) const {
    return probs_.at(static_cast<std::size_t>(v + max_value_));
  }
  double prob(i64 v) const { return static_cast<double>(exact(v)); }
  HighFloat total() const;
  // Standard deviation of the truncated distribution (mean is 0).
  double stddev() const;

 private:
  double sigma_;
  i64 max_value_;
  std::vector<HighFloat> probs_;
};

double tv_distance(const EmpiricalHistogram& h, const TargetDistribution& t);
// Both inputs already normalized and aligned.
double tv_distance(std::span<const double> p, std::span<const double> q);

struct ChiSquareResult {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
};

// Adjacent bins are merged left to right until each expects >= min_expected.
ChiSquareResult chi_square(const EmpiricalHistogram& h, const TargetDistribution& t,
                           double min_expected = 5.0);

struct MomentResult {
  double mean = 0;
  double std = 0;
  double target_std = 0;
  double z_mean = 0;  // mean / (target_std / sqrt(total))
  double z_std = 0;   // (std - target_std) / (target_std / sqrt(2 total))
};

MomentResult moment_check(const EmpiricalHistogram& h, double sigma);

// {"tv", "chi2": {"stat", "dof", "p"}, "mean", "std"}
std::string stats_json(const EmpiricalHistogram& h, const TargetDistribution& t);

}  // namespace latsamp

#endif  // LATSAMP_STATS_HPP_
