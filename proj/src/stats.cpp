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

#include "latsamp/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "json.hpp"

namespace latsamp {

EmpiricalHistogram::EmpiricalHistogram(i64 max_value)
    : max_value_(max_value), counts_(static_cast<std::size_t>(2 * max_value + 1), 0) {
  if (max_value < 0) throw std::invalid_argument("max_value must be >= 0");
}

EmpiricalHistogram::EmpiricalHistogram(i64 max_value, std::span<const i64> samples)
    : EmpiricalHistogram(max_value) {
  for (i64 v : samples) add(v);
}

void EmpiricalHistogram::add(i64 v, u64 times) {
  if (v < -max_value_ || v > max_value_) {
    throw std::out_of_range("sample " + std::to_string(v) + " outside support");
  }
  counts_[static_cast<std::size_t>(v + max_value_)] += times;
  total_ += times;
}

void EmpiricalHistogram::merge(const EmpiricalHistogram& other) {
  if (other.max_value_ != max_value_) throw std::invalid_argument("support mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

TargetDistribution::TargetDistribution(double sigma, i64 max_value)
    : sigma_(sigma), max_value_(max_value) {
  if (!(sigma > 0) || max_value < 0) throw std::invalid_argument("bad target");
  const HighFloat s(sigma);
  const HighFloat two_s2 = 2 * s * s;
  HighFloat sum = 0;
  probs_.reserve(static_cast<std::size_t>(2 * max_value + 1));
  for (i64 v = -max_value; v <= max_value; ++v) {
    const HighFloat x(v);
    probs_.push_back(exp(-(x * x) / two_s2));
    sum += probs_.back();
  }
  for (HighFloat& p : probs_) p /= sum;
}

HighFloat TargetDistribution::total() const {
  HighFloat s = 0;
  for (const HighFloat& p : probs_) s += p;
  return s;
}

double TargetDistribution::stddev() const {
  HighFloat var = 0;
  for (i64 v = -max_value_; v <= max_value_; ++v) var += HighFloat(v) * HighFloat(v) * exact(v);
  return static_cast<double>(sqrt(var));
}

double tv_distance(const EmpiricalHistogram& h, const TargetDistribution& t) {
  if (h.total() == 0) throw EmptyHistogram("empty histogram");
  if (h.max_value() != t.max_value()) throw std::invalid_argument("support mismatch");
  HighFloat acc = 0;
  const HighFloat total(h.total());
  for (i64 v = -h.max_value(); v <= h.max_value(); ++v) {
    acc += abs(HighFloat(h.count(v)) / total - t.exact(v));
  }
  return static_cast<double>(acc / 2);
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("support mismatch");
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::fabs(p[i] - q[i]);
  return acc / 2;
}

ChiSquareResult chi_square(const EmpiricalHistogram& h, const TargetDistribution& t,
                           double min_expected) {
  if (h.total() == 0) throw EmptyHistogram("empty histogram");
  if (h.max_value() != t.max_value()) throw std::invalid_argument("support mismatch");
  const double total = static_cast<double>(h.total());
  std::vector<double> observed, expected;
  double obs = 0, exp_acc = 0;
  for (i64 v = -h.max_value(); v <= h.max_value(); ++v) {
    obs += static_cast<double>(h.count(v));
    exp_acc += t.prob(v) * total;
    if (exp_acc >= min_expected) {
      observed.push_back(obs);
      expected.push_back(exp_acc);
      obs = exp_acc = 0;
    }
  }
  if (!observed.empty()) {
    observed.back() += obs;
    expected.back() += exp_acc;
  }
  if (observed.size() < 2) throw InsufficientBins("fewer than two bins after merging");
  ChiSquareResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    r.statistic += d * d / expected[i];
  }
  r.dof = static_cast<int>(observed.size()) - 1;
  r.p_value = boost::math::gamma_q(r.dof / 2.0, r.statistic / 2.0);
  return r;
}

MomentResult moment_check(const EmpiricalHistogram& h, double sigma) {
  if (h.total() == 0) throw EmptyHistogram("empty histogram");
  MomentResult r;
  const double n = static_cast<double>(h.total());
  long double s1 = 0, s2 = 0;
  for (i64 v = -h.max_value(); v <= h.max_value(); ++v) {
    const long double c = h.count(v);
    s1 += c * v;
    s2 += c * v * v;
  }
  r.mean = static_cast<double>(s1 / n);
  r.std = static_cast<double>(std::sqrt(s2 / n - (s1 / n) * (s1 / n)));
  r.target_std = TargetDistribution(sigma, h.max_value()).stddev();
  r.z_mean = r.mean / (r.target_std / std::sqrt(n));
  r.z_std = (r.std - r.target_std) / (r.target_std / std::sqrt(2 * n));
  return r;
}

std::string stats_json(const EmpiricalHistogram& h, const TargetDistribution& t) {
  const ChiSquareResult c = chi_square(h, t);
  const MomentResult m = moment_check(h, t.sigma());
  nlohmann::json j = {
      {"tv", tv_distance(h, t)},
      {"chi2", {{"stat", c.statistic}, {"dof", c.dof}, {"p", c.p_value}}},
      {"mean", m.mean},
      {"std", m.std},
  };
  return j.dump(2);
}

}  // namespace latsamp
