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

// Acceptance suite. Prints one PASS/FAIL line per criterion; with a numeric
// argument runs only that criterion. Exit status is nonzero if any selected
// criterion fails.

#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "latsamp/datapath.hpp"
#include "latsamp/knuth_yao.hpp"
#include "latsamp/ntt.hpp"
#include "latsamp/rlwe.hpp"
#include "latsamp/stats.hpp"
#include "latsamp/ziggurat.hpp"

namespace {

using namespace latsamp;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using Clock = std::chrono::steady_clock;

// Pinned tolerances.
constexpr double kNttSeconds = 60.0;
constexpr int kNttPairs = 200;
constexpr int kWideMulKeys = 1000;
constexpr int kBitExactTriples = 20;
constexpr std::size_t kBitExactCount = 10000;
constexpr double kBitExactSeconds = 120.0;
constexpr int kDistSamples = 1000000;
constexpr double kTvBound = 3e-3;
constexpr double kChiLevel = 1e-3;
constexpr int kChiSeeds = 20;
constexpr int kChiMinPass = 19;
constexpr double kDistSeconds = 600.0;
constexpr int kOracleMatrices = 5;
constexpr int kOracleDraws = 1000000;
constexpr u64 kWalkSteps = 1000000;
constexpr int kEarlyStopTrials = 10000;
constexpr int kRlweTrials = 1000;
constexpr double kRlweMinRate = 0.99;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Polynomial random_poly(std::size_t n, u64 q, std::mt19937_64& rng) {
  std::vector<u64> c(n);
  for (u64& v : c) v = rng() % q;
  return Polynomial(std::move(c), q);
}

Outcome ntt_correctness() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  int checked = 0;
  for (std::size_t n : {8u, 64u, 256u, 512u}) {
    for (u64 q : {4093u, 12289u}) {
      const NttPlan plan(make_ring_params(n, q));
      for (int t = 0; t < kNttPairs; ++t) {
        const Polynomial a = random_poly(n, q, rng), b = random_poly(n, q, rng);
        if (poly_mul(a, b, plan) != schoolbook_negacyclic(a, b)) {
          return {false, "mismatch at n=" + std::to_string(n) + " q=" + std::to_string(q)};
        }
        ++checked;
      }
    }
  }
  const double s = seconds_since(t0);
  return {s < kNttSeconds, std::to_string(checked) + " pairs exact, " + fmt("%.2f s", s)};
}

Outcome wide_mul_fidelity() {
  DatapathPool pool(make_ring_params(512, 4093));
  pool.configure_for_sampling(4);
  const WideMulPlan plan = pool.make_wide_mul_plan(64, 5);
  std::mt19937_64 rng(2);
  bool counts_ok = true;
  for (u64 x = 0; x < 32; ++x) {
    for (int t = 0; t < kWideMulKeys; ++t) {
      const Wide k(rng());
      const ComponentUsage before = pool.report().at(Component::kSamplerControl);
      if (pool.wide_mul(plan, k, x) != k * x) {
        return {false, "product mismatch at x=" + std::to_string(x)};
      }
      const ComponentUsage after = pool.report().at(Component::kSamplerControl);
      counts_ok = counts_ok && after.mul_ops - before.mul_ops == 6 &&
                  after.add_ops - before.add_ops == 5;
    }
  }
  return {counts_ok && plan.num_limbs == 6 && plan.num_carry_adds == 5,
          "32 x " + std::to_string(kWideMulKeys) + " products exact; " +
              (counts_ok ? "6 mul + 5 add per call" : "micro-op count off")};
}

Outcome dsp_offload() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"LP", "BLISS"}) {
    const ParameterSet ps = load_parameter_set(name);
    const ProbabilityMatrix ky = build_probability_matrix(ps.gauss);
    const ZigguratTable zig = build_ziggurat_table(ps.gauss, 64);
    const SamplerTables tables{&ky, &zig};
    const auto zi = run_sampler(RunMode::kIntegrated, SamplerAlg::kZiggurat, ps, tables, 10000, 7);
    const auto zs = run_sampler(RunMode::kStandalone, SamplerAlg::kZiggurat, ps, tables, 10000, 7);
    const auto ki = run_sampler(RunMode::kIntegrated, SamplerAlg::kKnuthYao, ps, tables, 10000, 7);
    const auto& zi_u = zi.report.at(Component::kSamplerControl);
    const auto& zs_u = zs.report.at(Component::kSamplerControl);
    u64 ky_muls = 0;
    for (const auto& [c, u] : ki.report.components) ky_muls += u.mul_ops;
    ok = ok && zi_u.dedicated_muls == 0 && zs_u.dedicated_muls > 0 && ky_muls == 0;
    detail += std::string(name) + ": zig dedicated_muls integrated=" +
              std::to_string(zi_u.dedicated_muls) + " standalone=" +
              std::to_string(zs_u.dedicated_muls) + " (borrowed mul ops " +
              std::to_string(zi_u.mul_ops) + "), ky mul ops=" + std::to_string(ky_muls) +
              "; ";
  }
  return {ok, detail};
}

Outcome bit_exact() {
  const auto t0 = Clock::now();
  int triples = 0;
  for (const char* name : {"LP", "BLISS"}) {
    const ParameterSet ps = load_parameter_set(name);
    const ProbabilityMatrix ky = build_probability_matrix(ps.gauss);
    const ZigguratTable zig = build_ziggurat_table(ps.gauss, 64);
    const SamplerTables tables{&ky, &zig};
    for (SamplerAlg alg : {SamplerAlg::kKnuthYao, SamplerAlg::kZiggurat}) {
      for (u64 seed = 7; seed < 7 + kBitExactTriples / 4; ++seed) {
        const auto sa = run_sampler(RunMode::kStandalone, alg, ps, tables, kBitExactCount, seed);
        const auto in = run_sampler(RunMode::kIntegrated, alg, ps, tables, kBitExactCount, seed);
        if (sa.samples != in.samples) {
          return {false, std::string("divergence for ") + name + " seed " + std::to_string(seed)};
        }
        ++triples;
      }
    }
  }
  const double s = seconds_since(t0);
  return {triples >= kBitExactTriples && s < kBitExactSeconds,
          std::to_string(triples) + " triples x " + std::to_string(kBitExactCount) +
              " samples identical, " + fmt("%.1f s", s)};
}

// Mean TV of a perfect sampler at this support and sample size, for context.
double sampling_floor(const TargetDistribution& t, double n) {
  double acc = 0;
  for (i64 v = -t.max_value(); v <= t.max_value(); ++v) {
    const double p = t.prob(v);
    acc += std::sqrt(2 * p * (1 - p) / (M_PI * n));
  }
  return acc / 2;
}

Outcome distribution(SamplerAlg alg) {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const char* name : {"LP", "BLISS"}) {
    const ParameterSet ps = load_parameter_set(name);
    const GaussianPolySampler sampler(ps, alg, 64);
    const TargetDistribution target(ps.gauss.sigma, ps.gauss.max_value);
    int chi_pass = 0;
    double tv_seed1 = 0;
    for (int seed = 1; seed <= kChiSeeds; ++seed) {
      BitSource src(static_cast<u64>(seed));
      EmpiricalHistogram h(ps.gauss.max_value);
      for (int n = 0; n < kDistSamples; ++n) h.add(sampler.sample(src));
      if (seed == 1) tv_seed1 = tv_distance(h, target);
      chi_pass += chi_square(h, target).p_value > kChiLevel ? 1 : 0;
    }
    const bool set_ok = tv_seed1 < kTvBound && chi_pass >= kChiMinPass;
    ok = ok && set_ok;
    detail += std::string(name) + ": tv=" + fmt("%.5f", tv_seed1) + " (perfect-sampler mean " +
              fmt("%.5f", sampling_floor(target, kDistSamples)) + "), chi2 p>0.001 in " +
              std::to_string(chi_pass) + "/" + std::to_string(kChiSeeds) +
              (set_ok ? "" : " [FAIL]") + "; ";
  }
  const double s = seconds_since(t0);
  return {ok && s < kDistSeconds, detail + fmt("%.1f s", s)};
}

Outcome ky_small_oracle() {
  const std::vector<std::vector<double>> probs{
      {0.5, 0.5},
      {0.25, 0.5, 0.25},
      {0.3, 0.4, 0.2, 0.1},
      {0.2, 0.3, 0.25, 0.15, 0.06, 0.03, 0.01},
      {0.11, 0.2, 0.19, 0.17, 0.14, 0.1, 0.06, 0.03},
  };
  const unsigned lambdas[] = {2, 4, 8, 10, 12};
  double worst = 0;
  for (int m = 0; m < kOracleMatrices; ++m) {
    const ProbabilityMatrix pm = matrix_from_probabilities(probs[m], lambdas[m]);
    const auto exact = ky_sample_exhaustive_check(pm, 64);
    BitSource src(100 + static_cast<u64>(m));
    std::map<i64, double> freq;
    for (int n = 0; n < kOracleDraws; ++n) freq[ky_sample(pm, src).value] += 1.0 / kOracleDraws;
    std::map<i64, double> all;
    for (const auto& [v, p] : exact) all[v] = 0;
    for (const auto& [v, f] : freq) all[v] = 0;
    double tv = 0;
    for (const auto& [v, unused] : all) {
      const double pe = exact.count(v) ? static_cast<double>(exact.at(v)) : 0;
      const double pf = freq.count(v) ? freq.at(v) : 0;
      tv += std::fabs(pe - pf);
    }
    worst = std::max(worst, tv / 2);
  }
  return {worst < kTvBound, std::to_string(kOracleMatrices) + " matrices, worst tv=" +
                                fmt("%.5f", worst)};
}

// Geometric form of the decision in exact rationals.
bool rational_decision(const ZigguratTable& t, std::size_t i, i64 x, u64 y_prime, bool b) {
  const unsigned l = t.lambda();
  const cpp_rational unit(cpp_int(1) << l);
  auto fixed = [&](const Wide& raw) { return cpp_rational(cpp_int(raw)) / unit; };
  if (x > 0 && x <= t.x_floor[i - 1]) return true;
  if (x == 0 && b) return false;
  const cpp_rational top = fixed(t.y_bar_raw[i - 1]), bottom = fixed(t.y_bar_raw[i]);
  const cpp_rational y = bottom + cpp_rational(y_prime) / unit * (top - bottom);
  if (y <= fixed(t.px_raw[static_cast<std::size_t>(x)])) return true;
  if (t.sigma_class[i] == SigmaClass::kConcave && t.slope_defined[i]) {
    return y <= bottom + fixed(t.slope_k_raw[i]) * (x - t.x_floor[i]);
  }
  return false;
}

Outcome zig_decision_oracle() {
  const ZigguratTable t = build_ziggurat_table(make_gaussian_params(1.2, 9, 16), 4);
  NativeAlu alu;
  u64 tuples = 0, mismatches = 0;
  for (std::size_t i = 1; i <= t.m; ++i) {
    for (i64 x = 0; x <= t.x_floor[i]; ++x) {
      for (u64 y = 0; y < (u64{1} << 16); ++y) {
        for (bool b : {false, true}) {
          const bool got = zig_accept(t, {i, false, b, x, y}, alu);
          mismatches += got != rational_decision(t, i, x, y, b) ? 1 : 0;
          ++tuples;
        }
      }
    }
  }
  return {mismatches == 0,
          std::to_string(tuples) + " tuples, " + std::to_string(mismatches) + " mismatches"};
}

Outcome ky_register_bound() {
  const ProbabilityMatrix pm = build_probability_matrix(load_parameter_set("BLISS").gauss);
  BitSource src(9);
  KyWalkStats stats;
  try {
    while (stats.steps < kWalkSteps) ky_sample(pm, src, {}, &stats);
  } catch (const WalkBoundViolation& e) {
    return {false, e.what()};
  }
  const ProbabilityMatrix lp = build_probability_matrix(load_parameter_set("LP").gauss);
  int compared = 0, differing = 0;
  for (int t = 0; t < kEarlyStopTrials; ++t) {
    BitSource a(static_cast<u64>(t)), b(static_cast<u64>(t));
    const KySample plain = ky_sample(lp, a, KyOptions{false, 10000});
    const KySample early = ky_sample(lp, b);
    if (plain.bits_used <= lp.lambda() + 1) {
      ++compared;
      differing += plain.value != early.value ? 1 : 0;
    }
  }
  const bool ok = stats.min_d >= -static_cast<i128>(pm.rows()) &&
                  stats.max_d <= static_cast<i128>(pm.hd_sum()) && differing == 0;
  return {ok, std::to_string(stats.steps) + " steps, d in [" +
                  std::to_string(static_cast<i64>(stats.min_d)) + ", " +
                  std::to_string(static_cast<i64>(stats.max_d)) + "], hd_sum=" +
                  std::to_string(pm.hd_sum()) + ", d_width=" + std::to_string(pm.d_width()) +
                  "; early stop: " + std::to_string(compared) + " single-pass trials, " +
                  std::to_string(differing) + " differ"};
}

// Normal approximation of the per-message success rate: each decrypted
// coefficient carries e*u + e2 - s*e1, variance 2n*sigma^4 + sigma^2.
double predicted_success(const ParameterSet& ps) {
  const double sd = ps.gauss.sigma;
  const double n = static_cast<double>(ps.ring.n);
  const double noise = std::sqrt(2 * n * std::pow(sd, 4) + sd * sd);
  const double margin = static_cast<double>(ps.ring.q.value) / 4;
  const double coeff_fail = std::erfc(margin / (noise * std::sqrt(2.0)));
  return std::pow(1 - coeff_fail, n);
}

Outcome rlwe_round_trip() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"LP", "BLISS"}) {
    const ParameterSet ps = load_parameter_set(name);
    const NttPlan plan(ps.ring);
    detail += std::string(name) + " predicted " + fmt("%.4f", predicted_success(ps)) + "; ";
    for (SamplerAlg alg : {SamplerAlg::kKnuthYao, SamplerAlg::kZiggurat}) {
      const GaussianPolySampler sampler(ps, alg, 64);
      BitSource src(3);
      int decrypted = 0, exact_keys = 0;
      for (int t = 0; t < kRlweTrials; ++t) {
        const RlweSample s = make_rlwe_sample(sampler, plan, src);
        exact_keys += (s.pair.b - schoolbook_negacyclic(s.pair.a, s.secret)) == s.error ? 1 : 0;
        Polynomial m(ps.ring.n, ps.ring.q.value);
        for (std::size_t i = 0; i < m.size(); ++i) m.set(i, src.next_bit() ? 1 : 0);
        decrypted += decrypt(s.secret, encrypt(s.pair, m, sampler, plan, src), plan) == m;
      }
      const double rate = static_cast<double>(decrypted) / kRlweTrials;
      const bool set_ok = rate >= kRlweMinRate && exact_keys == kRlweTrials;
      ok = ok && set_ok;
      detail += std::string(name) + (alg == SamplerAlg::kKnuthYao ? "/ky" : "/zig") +
                ": round trip " + fmt("%.3f", rate) + ", b-a*s==e " +
                std::to_string(exact_keys) + "/" + std::to_string(kRlweTrials) +
                (set_ok ? "" : " [FAIL]") + "; ";
    }
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"NTT product equals schoolbook", ntt_correctness},
      {"wide multiplication on borrowed units", wide_mul_fidelity},
      {"multiplier offload", dsp_offload},
      {"integrated vs standalone bit-exact", bit_exact},
      {"Knuth-Yao distribution", [] { return distribution(SamplerAlg::kKnuthYao); }},
      {"Ziggurat distribution", [] { return distribution(SamplerAlg::kZiggurat); }},
      {"Knuth-Yao small-instance oracle", ky_small_oracle},
      {"Ziggurat decision oracle", zig_decision_oracle},
      {"Knuth-Yao counter bound", ky_register_bound},
      {"RLWE round trip", rlwe_round_trip},
  };
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failures = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    if (only != 0 && static_cast<int>(c + 1) != only) continue;
    Outcome o;
    try {
      o = criteria[c].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2zu %s: %s -- %s\n", c + 1, o.pass ? "PASS" : "FAIL",
                criteria[c].first, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
