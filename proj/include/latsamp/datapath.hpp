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

#ifndef LATSAMP_DATAPATH_HPP_
#define LATSAMP_DATAPATH_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "latsamp/alu.hpp"
#include "latsamp/arith.hpp"
#include "latsamp/knuth_yao.hpp"
#include "latsamp/ntt.hpp"
#include "latsamp/ziggurat.hpp"

namespace latsamp {

class ModeConflict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class OperandOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};
class WidthOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

enum class UnitMode : std::uint8_t {
  kNttButterfly,
  kModAdd,
  kModMul,
  kGeneralAdd,  // bypasses modular reduction
  kGeneralMul,  // bypasses modular reduction
  kIdle,
};

enum class UnitKind : std::uint8_t {
  kNttStage,         // one butterfly per NTT stage
  kPreNttMultiplier, // psi pre-scaling multipliers of the negacyclic wrap
};

enum class Component : std::uint8_t { kSamplerControl, kNtt, kRlwe };

const char* to_string(UnitMode m);
const char* to_string(Component c);

struct DatapathUnit {
  std::size_t id = 0;
  UnitKind kind = UnitKind::kNttStage;
  UnitMode mode = UnitMode::kNttButterfly;
  unsigned width = 0;  // ceil(log2 q)
};

enum class OpKind : std::uint8_t { kAdd, kMul, kSub };

struct MicroOp {
  OpKind op = OpKind::kAdd;
  u64 a = 0;
  u64 b = 0;
  Component attributed_to = Component::kSamplerControl;
  std::uint32_t unit = 0;
  std::uint8_t carry_in = 0;
  bool borrowed = true;  // false: a multiplier/adder owned by the component
};

// One trace entry: a micro-op, a reconfiguration, or a whole NTT-mode
// polynomial operation occupying every stage unit.
struct TraceEvent {
  enum class Kind : std::uint8_t { kMicroOp, kConfigure, kNttOperation };
  Kind kind = Kind::kMicroOp;
  MicroOp op;
  u64 ntt_mul_ops = 0;
  u64 ntt_add_ops = 0;
};

struct ComponentUsage {
  u64 mul_ops = 0;
  u64 add_ops = 0;
  u64 dedicated_muls = 0;     // multipliers instantiated inside the component
  u64 dedicated_mul_ops = 0;  // multiplies executed on them
  std::set<std::size_t> borrowed_units;
  // Modes of the units this component occupied, from the pool's state.
  std::map<UnitMode, std::size_t> units_by_mode;
  friend bool operator==(const ComponentUsage&, const ComponentUsage&) = default;
};

struct ResourceReport {
  std::map<Component, ComponentUsage> components;

  const ComponentUsage& at(Component c) const;
  std::string to_json() const;
};

// Aggregates a trace (units_by_mode stays empty: the trace has no modes).
ResourceReport resource_report(std::span<const TraceEvent> trace);

// Partition of a wide x small unsigned product onto reconfigured units: the
// wide operand is cut into num_limbs limbs of limb_width bits, each limb
// times the small operand is one general multiply (partial_width bits), and
// num_limbs - 1 chained general adds fold every partial's high bits into the
// next limb position.
struct WideMulPlan {
  unsigned wide_width = 64;
  unsigned small_width = 5;
  unsigned limb_width = 12;
  unsigned num_limbs = 6;
  unsigned partial_width = 17;
  unsigned num_carry_adds = 5;
  std::vector<std::size_t> mul_units;
  std::vector<std::size_t> add_units;
};

// A pool of log2(n) NTT butterfly units plus two pre-NTT multipliers, each
// switchable between NTT duty and general sampler arithmetic. Single owner.
class DatapathPool {
 public:
  explicit DatapathPool(const RingParams& params);

  const std::vector<DatapathUnit>& units() const { return units_; }
  std::size_t ntt_unit_count() const { return ntt_units_; }
  unsigned unit_width() const { return width_; }
  const RingParams& params() const { return params_; }

  // One mode per unit. Pre-NTT multipliers accept only multiply modes or Idle.
  void configure_units(const std::vector<UnitMode>& assignment);
  void configure_for_ntt();
  // Pre-NTT pair and the first `mul_stage_units` stage units as GeneralMul,
  // the remaining stage units as GeneralAdd.
  void configure_for_sampling(std::size_t mul_stage_units);
  // Every stage unit as GeneralAdd; pre-NTT multipliers idle.
  void configure_for_additions();

  // Negacyclic product in NTT mode; ModeConflict unless all stage units are
  // NttButterfly and the pre-NTT multipliers are ModMul.
  Polynomial poly_mul(const Polynomial& a, const Polynomial& b, const NttPlan& plan,
                      Component attributed = Component::kNtt);

  WideMulPlan make_wide_mul_plan(unsigned wide_width, unsigned small_width) const;

  Wide wide_mul(const WideMulPlan& plan, const Wide& k, u64 x,
                Component c = Component::kSamplerControl);

  // Sum in unit-width segments with carries between cascaded GeneralAdd
  // units; operands and result are two's-complement `width`-bit values.
  i128 cascaded_add(std::span<const i128> operands, unsigned width,
                    unsigned carry_in = 0,
                    Component c = Component::kSamplerControl);

  // Like cascaded_add but wider than the adder chain: repeated passes, each
  // at most the chain's capacity, with the carry handed between passes.
  Wide wide_add(const Wide& a, const Wide& b, unsigned width,
                Component c = Component::kSamplerControl);

  // Accounting for arithmetic done on hardware owned by the component.
  void record_dedicated(Component c, u64 mul_ops, u64 add_ops, u64 multipliers);

  void set_trace_enabled(bool on) { trace_enabled_ = on; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  ResourceReport report() const;

 private:
  std::vector<std::size_t> units_in_mode(UnitMode m) const;
  u64 issue(OpKind op, u64 a, u64 b, std::size_t unit, Component c,
            UnitMode need, unsigned carry_in = 0);
  Wide segmented_add(const Wide& a, const Wide& b, unsigned carry_in,
                     unsigned width, Component c, unsigned* carry_out);

  RingParams params_;
  std::vector<DatapathUnit> units_;
  std::size_t ntt_units_ = 0;
  unsigned width_ = 0;
  bool trace_enabled_ = false;
  std::vector<TraceEvent> trace_;
  std::map<Component, ComponentUsage> usage_;
};

// SamplerAlu backed by a configured pool: every add is a cascaded add, every
// multiply a wide_mul partition, all attributed to sampler control.
class IntegratedAlu final : public SamplerAlu {
 public:
  IntegratedAlu(DatapathPool& pool, unsigned lambda, unsigned x_bits);

  i128 add(i128 a, i128 b, unsigned carry_in, unsigned width) override;
  Wide add_wide(const Wide& a, const Wide& b, unsigned width) override;
  Wide mul_small(u128 k, u64 x, unsigned k_bits, unsigned x_bits) override;
  Wide mul_wide(u128 a, const Wide& b, unsigned a_bits, unsigned b_bits) override;


 private:
  const WideMulPlan& plan_for(std::optional<WideMulPlan>& slot, unsigned wide,
                              unsigned small);

  DatapathPool& pool_;
  unsigned lambda_;
  unsigned x_bits_;
  std::optional<WideMulPlan> sline_plan_;
  std::optional<WideMulPlan> height_plan_;
};

enum class SamplerAlg { kKnuthYao, kZiggurat };
enum class RunMode { kStandalone, kIntegrated };

struct RunResult {
  std::vector<i64> samples;
  ResourceReport report;
  std::vector<TraceEvent> trace;
};

struct RunOptions {
  std::size_t zig_rectangles = 64;
  bool record_trace = false;
};

// Prebuilt sampler tables for one parameter set.
struct SamplerTables {
  const ProbabilityMatrix* ky = nullptr;
  const ZigguratTable* zig = nullptr;
};

RunResult run_sampler(RunMode mode, SamplerAlg alg, const ParameterSet& params,
                      const SamplerTables& tables, std::size_t count, u64 seed,
                      const RunOptions& opts = {});

inline RunResult run_integrated(SamplerAlg alg, const ParameterSet& params,
                                const SamplerTables& tables, std::size_t count,
                                u64 seed, const RunOptions& opts = {}) {
  return run_sampler(RunMode::kIntegrated, alg, params, tables, count, seed, opts);
}

}  // namespace latsamp

#endif  // LATSAMP_DATAPATH_HPP_
