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

#include "latsamp/datapath.hpp"

#include <gtest/gtest.h>

#include <random>

#include "json.hpp"

namespace latsamp {
namespace {

// n=512 with the 12-bit q=4093 units: the 9-unit pool of the worked example.
RingParams example_ring() { return make_ring_params(512, 4093); }

DatapathPool sampling_pool(const RingParams& r, std::size_t stage_muls) {
  DatapathPool pool(r);
  pool.configure_for_sampling(stage_muls);
  return pool;
}

TEST(DatapathPoolTest, Shape) {
  const DatapathPool pool(example_ring());
  EXPECT_EQ(pool.ntt_unit_count(), 9u);
  EXPECT_EQ(pool.units().size(), 11u);
  EXPECT_EQ(pool.unit_width(), 12u);
  EXPECT_EQ(DatapathPool(load_parameter_set("BLISS").ring).unit_width(), 14u);
  for (const DatapathUnit& u : pool.units()) {
    EXPECT_EQ(u.width, 12u);
    EXPECT_EQ(u.mode, u.kind == UnitKind::kNttStage ? UnitMode::kNttButterfly
                                                     : UnitMode::kModMul);
  }
}

TEST(DatapathPoolTest, ExampleSamplingConfiguration) {
  DatapathPool pool = sampling_pool(example_ring(), 4);
  std::map<UnitMode, int> stage_modes;
  for (std::size_t id = 0; id < 9; ++id) ++stage_modes[pool.units()[id].mode];
  EXPECT_EQ(stage_modes[UnitMode::kGeneralMul], 4);
  EXPECT_EQ(stage_modes[UnitMode::kGeneralAdd], 5);
  EXPECT_EQ(pool.units()[9].mode, UnitMode::kGeneralMul);
  EXPECT_EQ(pool.units()[10].mode, UnitMode::kGeneralMul);

  const WideMulPlan p = pool.make_wide_mul_plan(64, 5);
  EXPECT_EQ(p.limb_width, 12u);
  EXPECT_EQ(p.num_limbs, 6u);
  EXPECT_EQ(p.partial_width, 17u);
  EXPECT_EQ(p.num_carry_adds, 5u);
  EXPECT_GE(p.num_limbs * p.limb_width, 64u + 5u);
  EXPECT_EQ(p.mul_units, (std::vector<std::size_t>{0, 1, 2, 3, 9, 10}));
  EXPECT_EQ(p.add_units, (std::vector<std::size_t>{4, 5, 6, 7, 8}));
}

TEST(DatapathPoolTest, IntegratedZigOccupiesExampleShape) {
  const ParameterSet ps = make_parameter_set("example", 512, 4093, 3.33);
  const ZigguratTable zig = build_ziggurat_table(ps.gauss, 64);
  const RunResult r = run_sampler(RunMode::kIntegrated, SamplerAlg::kZiggurat, ps,
                                  {nullptr, &zig}, 2000, 3);
  const auto& modes = r.report.at(Component::kSamplerControl).units_by_mode;
  EXPECT_EQ(modes.at(UnitMode::kGeneralMul), 6u);  // 4 stage units + 2 pre-NTT
  EXPECT_EQ(modes.at(UnitMode::kGeneralAdd), 5u);
}

TEST(WideMulTest, Examples) {
  DatapathPool pool = sampling_pool(example_ring(), 4);
  pool.set_trace_enabled(true);
  const WideMulPlan p = pool.make_wide_mul_plan(64, 5);
  EXPECT_EQ(pool.wide_mul(p, 0, 17), 0);
  const ResourceReport r = resource_report(pool.trace());
  EXPECT_EQ(r.at(Component::kSamplerControl).mul_ops, 6u);
  EXPECT_EQ(r.at(Component::kSamplerControl).add_ops, 5u);
  const Wide k = pow2(64) - 1;
  EXPECT_EQ(pool.wide_mul(p, k, 31), k * 31);
  EXPECT_THROW(pool.wide_mul(p, pow2(64), 1), OperandOverflow);
  EXPECT_THROW(pool.wide_mul(p, 1, 32), OperandOverflow);
  EXPECT_THROW(pool.wide_mul(p, -1, 1), OperandOverflow);
}

TEST(WideMulTest, RandomSweep) {
  std::mt19937_64 rng(41);
  for (const RingParams& ring : {example_ring(), load_parameter_set("BLISS").ring}) {
    DatapathPool pool = sampling_pool(ring, 4);
    const unsigned small = ring.q.value == 4093 ? 5 : 11;
    const WideMulPlan p = pool.make_wide_mul_plan(64, small);
    for (int t = 0; t < 100000; ++t) {
      const Wide k(rng());
      const u64 x = rng() & ((u64{1} << small) - 1);
      ASSERT_EQ(pool.wide_mul(p, k, x), k * x);
    }
  }
}

TEST(WideMulTest, EveryMicroOpFitsItsUnit) {
  DatapathPool pool = sampling_pool(example_ring(), 4);
  pool.set_trace_enabled(true);
  const WideMulPlan p = pool.make_wide_mul_plan(64, 5);
  pool.wide_mul(p, pow2(64) - 1, 31);
  for (const TraceEvent& e : pool.trace()) {
    ASSERT_EQ(e.kind, TraceEvent::Kind::kMicroOp);
    EXPECT_LT(e.op.a, 1u << 12);
    EXPECT_LT(e.op.b, 1u << 12);
    EXPECT_TRUE(e.op.borrowed);
    EXPECT_EQ(e.op.attributed_to, Component::kSamplerControl);
    const auto& units = e.op.op == OpKind::kMul ? p.mul_units : p.add_units;
    EXPECT_NE(std::find(units.begin(), units.end(), e.op.unit), units.end());
  }
}

TEST(WideMulTest, BlissPlan) {
  DatapathPool pool = sampling_pool(load_parameter_set("BLISS").ring, 4);
  const WideMulPlan p = pool.make_wide_mul_plan(64, 11);
  EXPECT_EQ(p.limb_width, 14u);
  EXPECT_EQ(p.num_limbs, 6u);  // ceil((64 + 11) / 14)
  EXPECT_EQ(p.partial_width, 25u);
}

TEST(CascadedAddTest, Segments) {
  DatapathPool pool(example_ring());
  pool.configure_for_additions();
  pool.set_trace_enabled(true);
  const i128 one[2] = {5, 6};
  EXPECT_EQ(pool.cascaded_add(one, 8), 11);
  EXPECT_EQ(resource_report(pool.trace()).at(Component::kSamplerControl).add_ops, 1u);

  DatapathPool wide(example_ring());
  wide.configure_for_additions();
  wide.set_trace_enabled(true);
  const i128 d_update[2] = {2 * 30000, -4000};
  EXPECT_EQ(wide.cascaded_add(d_update, 17, 1), 56001);
  EXPECT_EQ(resource_report(wide.trace()).at(Component::kSamplerControl).add_ops, 2u);
}

TEST(CascadedAddTest, RandomSignedSums) {
  DatapathPool pool(example_ring());
  pool.configure_for_additions();
  std::mt19937_64 rng(42);
  for (int t = 0; t < 100000; ++t) {
    const unsigned width = 2 + static_cast<unsigned>(rng() % 100);
    const i128 half = static_cast<i128>(1) << (width - 2);
    auto draw = [&] {
      const i128 v = static_cast<i128>(rng()) << 64 | rng();
      return v % half;
    };
    const i128 ops[3] = {draw(), draw(), draw()};
    const unsigned carry = static_cast<unsigned>(rng() & 1);
    ASSERT_EQ(pool.cascaded_add(std::span(ops, 2), width, carry), ops[0] + ops[1] + carry);
  }
}

TEST(CascadedAddTest, Overflow) {
  DatapathPool pool(example_ring());
  pool.configure_for_additions();
  const i128 ops[2] = {1, 2};
  EXPECT_THROW(pool.cascaded_add(ops, 9 * 12 + 1), WidthOverflow);
  const i128 big[2] = {2000, 100};
  EXPECT_THROW(pool.cascaded_add(big, 12), WidthOverflow);
  DatapathPool few = sampling_pool(example_ring(), 8);  // one adder left
  EXPECT_THROW(few.cascaded_add(ops, 13), WidthOverflow);
  EXPECT_EQ(few.cascaded_add(ops, 12), 3);
}

TEST(WideAddTest, MultiPass) {
  DatapathPool pool = sampling_pool(example_ring(), 8);
  const Wide a = pow2(100) + 12345, b = pow2(99) - 7;
  EXPECT_EQ(pool.wide_add(a, b, 110), a + b);
  EXPECT_EQ(pool.wide_add(a, -b, 110), a - b);
}

TEST(ConfigureTest, ModeConflict) {
  const RingParams r = example_ring();
  const NttPlan plan(r);
  DatapathPool pool(r);
  std::mt19937_64 rng(43);
  std::vector<u64> c(512);
  for (u64& v : c) v = rng() % 4093;
  const Polynomial a(c, 4093);
  EXPECT_EQ(pool.poly_mul(a, a, plan), poly_mul(a, a, plan));

  std::vector<UnitMode> modes(11, UnitMode::kNttButterfly);
  modes[9] = modes[10] = UnitMode::kModMul;
  modes[2] = UnitMode::kGeneralMul;
  pool.configure_units(modes);
  EXPECT_THROW(pool.poly_mul(a, a, plan), ModeConflict);
  pool.configure_for_ntt();
  EXPECT_NO_THROW(pool.poly_mul(a, a, plan));

  modes[9] = UnitMode::kNttButterfly;
  EXPECT_THROW(pool.configure_units(modes), ModeConflict);
  EXPECT_THROW(pool.configure_units({UnitMode::kIdle}), ModeConflict);

  // Sampler arithmetic on NTT-mode units is refused too.
  const i128 ops[2] = {1, 2};
  EXPECT_THROW(pool.cascaded_add(ops, 8), WidthOverflow);
  EXPECT_THROW(pool.make_wide_mul_plan(64, 5), ModeConflict);
}

TEST(ConfigureTest, TraceNeverMixesModesWithoutReconfiguration) {
  const RingParams r = example_ring();
  const NttPlan plan(r);
  DatapathPool pool(r);
  pool.set_trace_enabled(true);
  const Polynomial one = Polynomial::monomial(512, 4093, 0);
  pool.poly_mul(one, one, plan);
  pool.configure_for_sampling(4);
  const WideMulPlan p = pool.make_wide_mul_plan(64, 5);
  pool.wide_mul(p, 99, 3);
  pool.configure_for_ntt();
  pool.poly_mul(one, one, plan);
  // Between two configure events, either only NTT operations or only
  // sampler micro-ops occur.
  bool saw_ntt = false, saw_sampler = false;
  for (const TraceEvent& e : pool.trace()) {
    if (e.kind == TraceEvent::Kind::kConfigure) {
      saw_ntt = saw_sampler = false;
    } else if (e.kind == TraceEvent::Kind::kNttOperation) {
      saw_ntt = true;
    } else {
      saw_sampler = true;
    }
    ASSERT_FALSE(saw_ntt && saw_sampler);
  }
}

TEST(RunTest, BitExactAndOffloaded) {
  for (const char* name : {"LP", "BLISS"}) {
    const ParameterSet ps = load_parameter_set(name);
    const ProbabilityMatrix ky = build_probability_matrix(ps.gauss);
    const ZigguratTable zig = build_ziggurat_table(ps.gauss, 64);
    const SamplerTables tables{&ky, &zig};
    for (SamplerAlg alg : {SamplerAlg::kKnuthYao, SamplerAlg::kZiggurat}) {
      const RunResult sa = run_sampler(RunMode::kStandalone, alg, ps, tables, 3000, 7);
      const RunResult in = run_integrated(alg, ps, tables, 3000, 7);
      ASSERT_EQ(sa.samples, in.samples) << name;
      const ComponentUsage& u = in.report.at(Component::kSamplerControl);
      EXPECT_EQ(u.dedicated_muls, 0u);
      EXPECT_EQ(u.dedicated_mul_ops, 0u);
      if (alg == SamplerAlg::kKnuthYao) {
        EXPECT_EQ(u.mul_ops, 0u);
        EXPECT_EQ(sa.report.at(Component::kSamplerControl).mul_ops, 0u);
      } else {
        EXPECT_GT(u.mul_ops, 0u);
        EXPECT_GT(sa.report.at(Component::kSamplerControl).dedicated_muls, 0u);
      }
    }
  }
}

TEST(RunTest, ReportMatchesTrace) {
  const ParameterSet ps = load_parameter_set("LP");
  const ZigguratTable zig = build_ziggurat_table(ps.gauss, 64);
  RunOptions opts;
  opts.record_trace = true;
  const RunResult r = run_integrated(SamplerAlg::kZiggurat, ps, {nullptr, &zig}, 500, 9, opts);
  const ResourceReport from_trace = resource_report(r.trace);
  const ComponentUsage& a = r.report.at(Component::kSamplerControl);
  const ComponentUsage& b = from_trace.at(Component::kSamplerControl);
  EXPECT_EQ(a.mul_ops, b.mul_ops);
  EXPECT_EQ(a.add_ops, b.add_ops);
  EXPECT_EQ(a.borrowed_units, b.borrowed_units);
  EXPECT_EQ(b.dedicated_mul_ops, 0u);
}

TEST(RunTest, EmptyRun) {
  const ParameterSet ps = load_parameter_set("LP");
  const ZigguratTable zig = build_ziggurat_table(ps.gauss, 64);
  RunOptions opts;
  opts.record_trace = true;
  const RunResult r = run_integrated(SamplerAlg::kZiggurat, ps, {nullptr, &zig}, 0, 1, opts);
  EXPECT_TRUE(r.samples.empty());
  EXPECT_TRUE(r.trace.empty());
  EXPECT_EQ(resource_report({}).at(Component::kSamplerControl), ComponentUsage{});
}

TEST(ResourceReportTest, JsonSchema) {
  DatapathPool pool = sampling_pool(example_ring(), 4);
  pool.wide_mul(pool.make_wide_mul_plan(64, 5), 5, 5);
  const nlohmann::json j = nlohmann::json::parse(pool.report().to_json());
  const auto& sc = j.at("sampler_control");
  EXPECT_EQ(sc.at("mul_ops"), 6);
  EXPECT_EQ(sc.at("add_ops"), 5);
  EXPECT_EQ(sc.at("dedicated_muls"), 0);
  EXPECT_EQ(sc.at("borrowed_units").size(), 11u);
  EXPECT_TRUE(j.contains("ntt"));
}

}  // namespace
}  // namespace latsamp
