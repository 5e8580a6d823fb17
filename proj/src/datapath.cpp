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

#include <algorithm>

#include "json.hpp"

namespace latsamp {

const char* to_string(UnitMode m) {
  switch (m) {
    case UnitMode::kNttButterfly: return "ntt_butterfly";
    case UnitMode::kModAdd: return "mod_add";
    case UnitMode::kModMul: return "mod_mul";
    case UnitMode::kGeneralAdd: return "general_add";
    case UnitMode::kGeneralMul: return "general_mul";
    case UnitMode::kIdle: return "idle";
  }
  return "?";
}

const char* to_string(Component c) {
  switch (c) {
    case Component::kSamplerControl: return "sampler_control";
    case Component::kNtt: return "ntt";
    case Component::kRlwe: return "rlwe";
  }
  return "?";
}

const ComponentUsage& ResourceReport::at(Component c) const {
  static const ComponentUsage empty;
  auto it = components.find(c);
  return it == components.end() ? empty : it->second;
}

std::string ResourceReport::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (Component c : {Component::kSamplerControl, Component::kNtt, Component::kRlwe}) {
    const ComponentUsage& u = at(c);
    nlohmann::json modes = nlohmann::json::object();
    for (const auto& [m, n] : u.units_by_mode) modes[to_string(m)] = n;
    j[to_string(c)] = {
        {"mul_ops", u.mul_ops},
        {"add_ops", u.add_ops},
        {"dedicated_muls", u.dedicated_muls},
        {"dedicated_mul_ops", u.dedicated_mul_ops},
        {"borrowed_units", std::vector<std::size_t>(u.borrowed_units.begin(),
                                                    u.borrowed_units.end())},
        {"units_by_mode", modes},
    };
  }
  return j.dump(2);
}

ResourceReport resource_report(std::span<const TraceEvent> trace) {
  ResourceReport r;
  for (const TraceEvent& e : trace) {
    switch (e.kind) {
      case TraceEvent::Kind::kConfigure:
        break;
      case TraceEvent::Kind::kNttOperation: {
        ComponentUsage& u = r.components[Component::kNtt];
        u.mul_ops += e.ntt_mul_ops;
        u.add_ops += e.ntt_add_ops;
        u.dedicated_mul_ops += e.ntt_mul_ops;
        break;
      }
      case TraceEvent::Kind::kMicroOp: {
        ComponentUsage& u = r.components[e.op.attributed_to];
        if (e.op.op == OpKind::kMul) {
          ++u.mul_ops;
          if (!e.op.borrowed) ++u.dedicated_mul_ops;
        } else {
          ++u.add_ops;
        }
        if (e.op.borrowed) u.borrowed_units.insert(e.op.unit);
        break;
      }
    }
  }
  return r;
}

DatapathPool::DatapathPool(const RingParams& params)
    : params_(params), width_(params.q.bits()) {
  while ((std::size_t{1} << ntt_units_) < params.n) ++ntt_units_;
  for (std::size_t i = 0; i < ntt_units_; ++i) {
    units_.push_back({i, UnitKind::kNttStage, UnitMode::kNttButterfly, width_});
  }
  for (std::size_t i = 0; i < 2; ++i) {
    units_.push_back({ntt_units_ + i, UnitKind::kPreNttMultiplier,
                      UnitMode::kModMul, width_});
  }
}

void DatapathPool::configure_units(const std::vector<UnitMode>& assignment) {
  if (assignment.size() != units_.size()) {
    throw ModeConflict("assignment must cover every unit");
  }
  for (std::size_t i = 0; i < units_.size(); ++i) {
    if (units_[i].kind == UnitKind::kPreNttMultiplier &&
        assignment[i] != UnitMode::kModMul && assignment[i] != UnitMode::kGeneralMul &&
        assignment[i] != UnitMode::kIdle) {
      throw ModeConflict("pre-NTT multipliers support multiply modes only");
    }
  }
  for (std::size_t i = 0; i < units_.size(); ++i) units_[i].mode = assignment[i];
  if (trace_enabled_) trace_.push_back({TraceEvent::Kind::kConfigure, {}, 0, 0});
}

void DatapathPool::configure_for_ntt() {
  std::vector<UnitMode> a(units_.size(), UnitMode::kNttButterfly);
  a[ntt_units_] = a[ntt_units_ + 1] = UnitMode::kModMul;
  configure_units(a);
}

void DatapathPool::configure_for_sampling(std::size_t mul_stage_units) {
  if (mul_stage_units >= ntt_units_) {
    throw ModeConflict("sampling configuration needs at least one adder unit");
  }
  std::vector<UnitMode> a(units_.size(), UnitMode::kGeneralAdd);
  for (std::size_t i = 0; i < mul_stage_units; ++i) a[i] = UnitMode::kGeneralMul;
  a[ntt_units_] = a[ntt_units_ + 1] = UnitMode::kGeneralMul;
  configure_units(a);
}

void DatapathPool::configure_for_additions() {
  std::vector<UnitMode> a(units_.size(), UnitMode::kGeneralAdd);
  a[ntt_units_] = a[ntt_units_ + 1] = UnitMode::kIdle;
  configure_units(a);
}

Polynomial DatapathPool::poly_mul(const Polynomial& a, const Polynomial& b,
                                  const NttPlan& plan, Component attributed) {
  for (const DatapathUnit& u : units_) {
    const UnitMode need = u.kind == UnitKind::kNttStage ? UnitMode::kNttButterfly
                                                        : UnitMode::kModMul;
    if (u.mode != need) {
      throw ModeConflict("unit " + std::to_string(u.id) + " is configured as " +
                         to_string(u.mode) + "; NTT needs every unit in NTT mode");
    }
  }
  if (plan.params().n != params_.n) throw std::invalid_argument("plan/pool mismatch");
  Polynomial c = plan.multiply(a, b);

  const u64 n = params_.n;
  const u64 butterflies = plan.butterflies_per_transform();
  // Three transforms, pointwise product, pre/post scaling of the wrap.
  const u64 muls = 3 * butterflies + n + 2 * n + 2 * n;
  const u64 adds = 3 * 2 * butterflies;
  ComponentUsage& u = usage_[attributed];
  u.mul_ops += muls;
  u.add_ops += adds;
  u.dedicated_mul_ops += muls;
  u.dedicated_muls = std::max<u64>(u.dedicated_muls, units_.size());
  if (trace_enabled_) {
    trace_.push_back({TraceEvent::Kind::kNttOperation, {}, muls, adds});
  }
  return c;
}

std::vector<std::size_t> DatapathPool::units_in_mode(UnitMode m) const {
  std::vector<std::size_t> ids;
  for (const DatapathUnit& u : units_) {
    if (u.mode == m) ids.push_back(u.id);
  }
  return ids;
}

WideMulPlan DatapathPool::make_wide_mul_plan(unsigned wide_width,
                                             unsigned small_width) const {
  if (small_width == 0 || small_width > width_) {
    throw std::invalid_argument("small operand must fit one unit");
  }
  WideMulPlan p;
  p.wide_width = wide_width;
  p.small_width = small_width;
  p.limb_width = width_;
  // Enough limbs that the full product frame is covered by the digits.
  p.num_limbs = (wide_width + small_width + width_ - 1) / width_;
  p.partial_width = width_ + small_width;
  p.num_carry_adds = p.num_limbs - 1;
  p.mul_units = units_in_mode(UnitMode::kGeneralMul);
  p.add_units = units_in_mode(UnitMode::kGeneralAdd);
  if (p.mul_units.empty() || p.add_units.empty()) {
    throw ModeConflict("wide multiplication needs GeneralMul and GeneralAdd units");
  }
  return p;
}

u64 DatapathPool::issue(OpKind op, u64 a, u64 b, std::size_t unit, Component c,
                        UnitMode need, unsigned carry_in) {
  const DatapathUnit& u = units_.at(unit);
  if (u.mode != need) {
    throw ModeConflict("unit " + std::to_string(unit) + " is " + to_string(u.mode) +
                       ", expected " + to_string(need));
  }
  if ((a >> u.width) != 0 || (b >> u.width) != 0) {
    throw OperandOverflow("operand exceeds unit width");
  }
  ComponentUsage& usage = usage_[c];
  u64 r = 0;
  if (op == OpKind::kMul) {
    ++usage.mul_ops;
    r = a * b;
  } else {
    ++usage.add_ops;
    r = a + b + carry_in;
  }
  usage.borrowed_units.insert(unit);
  if (trace_enabled_) {
    MicroOp m{op, a, b, c, static_cast<std::uint32_t>(unit),
              static_cast<std::uint8_t>(carry_in), true};
    trace_.push_back({TraceEvent::Kind::kMicroOp, m, 0, 0});
  }
  return r;
}

Wide DatapathPool::wide_mul(const WideMulPlan& plan, const Wide& k, u64 x,
                            Component c) {
  if (k < 0 || k >= pow2(plan.wide_width) || (x >> plan.small_width) != 0) {
    throw OperandOverflow("wide_mul operand exceeds the plan widths");
  }
  const unsigned w = plan.limb_width;
  const u64 mask = (u64{1} << w) - 1;
  std::vector<u64> partial(plan.num_limbs);
  for (unsigned j = 0; j < plan.num_limbs; ++j) {
    const u64 limb = static_cast<u64>((k >> (w * j)) & Wide(mask));
    partial[j] = issue(OpKind::kMul, limb, x, plan.mul_units[j % plan.mul_units.size()],
                       c, UnitMode::kGeneralMul);
  }
  Wide result = Wide(partial[0] & mask);
  unsigned carry = 0;
  for (unsigned j = 1; j < plan.num_limbs; ++j) {
    const u64 s = issue(OpKind::kAdd, partial[j] & mask, partial[j - 1] >> w,
                        plan.add_units[(j - 1) % plan.add_units.size()], c,
                        UnitMode::kGeneralAdd, carry);
    result |= Wide(s & mask) << (w * j);
    carry = static_cast<unsigned>(s >> w);
  }
  if ((partial[plan.num_limbs - 1] >> w) != 0 || carry != 0) {
    throw std::logic_error("wide_mul plan does not cover the product frame");
  }
  return result;
}

Wide DatapathPool::segmented_add(const Wide& a, const Wide& b, unsigned carry_in,
                                 unsigned width, Component c, unsigned* carry_out) {
  const Wide modulus = pow2(width);
  const Wide half = pow2(width - 1);
  const Wide exact = a + b + carry_in;
  if (a < -half || a >= half || b < -half || b >= half || exact < -half ||
      exact >= half) {
    throw WidthOverflow("sum does not fit a " + std::to_string(width) + "-bit register");
  }
  const auto adders = units_in_mode(UnitMode::kGeneralAdd);
  if (adders.empty()) throw WidthOverflow("no GeneralAdd units configured");
  const Wide ua = a < 0 ? a + modulus : a;
  const Wide ub = b < 0 ? b + modulus : b;
  Wide sum = 0;
  unsigned carry = carry_in;
  const unsigned segments = (width + width_ - 1) / width_;
  for (unsigned s = 0; s < segments; ++s) {
    const unsigned lo = s * width_;
    const unsigned seg = std::min(width_, width - lo);
    const Wide seg_mask = pow2(seg) - 1;
    const u64 sa = static_cast<u64>((ua >> lo) & seg_mask);
    const u64 sb = static_cast<u64>((ub >> lo) & seg_mask);
    const u64 r = issue(OpKind::kAdd, sa, sb, adders[s % adders.size()], c,
                        UnitMode::kGeneralAdd, carry);
    sum |= Wide(r & static_cast<u64>(seg_mask)) << lo;
    carry = static_cast<unsigned>(r >> seg);
  }
  if (carry_out != nullptr) *carry_out = carry;
  return sum >= half ? sum - modulus : sum;
}

i128 DatapathPool::cascaded_add(std::span<const i128> operands, unsigned width,
                                unsigned carry_in, Component c) {
  if (operands.empty()) throw std::invalid_argument("cascaded_add needs operands");
  const std::size_t capacity = units_in_mode(UnitMode::kGeneralAdd).size() * width_;
  if (width == 0 || width > capacity || width > 126) {
    throw WidthOverflow("width " + std::to_string(width) +
                        " exceeds the cascaded adder chain (" +
                        std::to_string(capacity) + " bits)");
  }
  Wide acc = Wide(operands[0]);
  if (operands.size() == 1) {
    acc = segmented_add(acc, 0, carry_in, width, c, nullptr);
  }
  for (std::size_t i = 1; i < operands.size(); ++i) {
    acc = segmented_add(acc, Wide(operands[i]), i == 1 ? carry_in : 0, width, c,
                        nullptr);
  }
  return static_cast<i128>(acc);
}

Wide DatapathPool::wide_add(const Wide& a, const Wide& b, unsigned width,
                            Component c) {
  // Segments wrap around the adder chain; each wrap is one more pass.
  return segmented_add(a, b, 0, width, c, nullptr);
}

void DatapathPool::record_dedicated(Component c, u64 mul_ops, u64 add_ops,
                                    u64 multipliers) {
  ComponentUsage& u = usage_[c];
  u.mul_ops += mul_ops;
  u.add_ops += add_ops;
  u.dedicated_mul_ops += mul_ops;
  u.dedicated_muls += multipliers;
}

ResourceReport DatapathPool::report() const {
  ResourceReport r;
  r.components = usage_;
  for (auto& [comp, u] : r.components) {
    u.units_by_mode.clear();
    const bool owns_pool = comp == Component::kNtt;
    for (const DatapathUnit& unit : units_) {
      if (owns_pool || u.borrowed_units.count(unit.id) != 0) ++u.units_by_mode[unit.mode];
    }
  }
  return r;
}

IntegratedAlu::IntegratedAlu(DatapathPool& pool, unsigned lambda, unsigned x_bits)
    : pool_(pool), lambda_(lambda), x_bits_(x_bits) {}

const WideMulPlan& IntegratedAlu::plan_for(std::optional<WideMulPlan>& slot,
                                           unsigned wide, unsigned small) {
  if (!slot || slot->wide_width != wide || slot->small_width != small) {
    slot = pool_.make_wide_mul_plan(wide, small);
  }
  return *slot;
}

i128 IntegratedAlu::add(i128 a, i128 b, unsigned carry_in, unsigned width) {
  const i128 ops[2] = {a, b};
  return pool_.cascaded_add(ops, width, carry_in);
}

Wide IntegratedAlu::add_wide(const Wide& a, const Wide& b, unsigned width) {
  return pool_.wide_add(a, b, width);
}

Wide IntegratedAlu::mul_small(u128 k, u64 x, unsigned k_bits, unsigned x_bits) {
  return pool_.wide_mul(plan_for(sline_plan_, k_bits, x_bits), Wide(k), x);
}

Wide IntegratedAlu::mul_wide(u128 a, const Wide& b, unsigned a_bits, unsigned b_bits) {
  // Schoolbook over unit-width chunks of a; each chunk is one wide_mul pass.
  const unsigned w = pool_.unit_width();
  const WideMulPlan& plan = plan_for(height_plan_, b_bits, w);
  const unsigned chunks = (a_bits + w - 1) / w;
  const u128 mask = (static_cast<u128>(1) << w) - 1;
  Wide acc = 0;
  for (unsigned t = 0; t < chunks; ++t) {
    const u64 chunk = static_cast<u64>((a >> (w * t)) & mask);
    Wide partial = pool_.wide_mul(plan, b, chunk) << (w * t);
    acc = t == 0 ? partial : pool_.wide_add(acc, partial, a_bits + b_bits + 1);
  }
  return acc;
}

RunResult run_sampler(RunMode mode, SamplerAlg alg, const ParameterSet& params,
                      const SamplerTables& tables, std::size_t count, u64 seed,
                      const RunOptions& opts) {
  RunResult out;
  if (count == 0) return out;
  if ((alg == SamplerAlg::kKnuthYao && tables.ky == nullptr) ||
      (alg == SamplerAlg::kZiggurat && tables.zig == nullptr)) {
    throw std::invalid_argument("sampler table not provided");
  }
  out.samples.reserve(count);
  BitSource src(seed);

  if (mode == RunMode::kStandalone) {
    NativeAlu alu;
    for (std::size_t s = 0; s < count; ++s) {
      out.samples.push_back(alg == SamplerAlg::kKnuthYao
                                ? ky_sample(*tables.ky, src, alu).value
                                : zig_sample(*tables.zig, src, alu).value);
    }
    ComponentUsage& u = out.report.components[Component::kSamplerControl];
    u.add_ops = alu.add_ops;
    u.mul_ops = alu.mul_small_ops + alu.mul_wide_ops;
    u.dedicated_mul_ops = u.mul_ops;
    // One multiplier per distinct product the sampler evaluates.
    u.dedicated_muls = (alu.mul_small_ops > 0 ? 1 : 0) + (alu.mul_wide_ops > 0 ? 1 : 0);
    return out;
  }

  DatapathPool pool(params.ring);
  pool.set_trace_enabled(opts.record_trace);
  if (alg == SamplerAlg::kKnuthYao) {
    pool.configure_for_additions();
    IntegratedAlu alu(pool, params.gauss.lambda, 1);
    for (std::size_t s = 0; s < count; ++s) {
      out.samples.push_back(ky_sample(*tables.ky, src, alu).value);
    }
  } else {
    const ZigguratTable& t = *tables.zig;
    const unsigned w = pool.unit_width();
    const unsigned limbs = (t.lambda() + t.x_bits + w - 1) / w;
    const std::size_t stage_muls =
        std::min<std::size_t>(limbs > 2 ? limbs - 2 : 0, pool.ntt_unit_count() - 1);
    pool.configure_for_sampling(stage_muls);
    IntegratedAlu alu(pool, t.lambda(), t.x_bits);
    for (std::size_t s = 0; s < count; ++s) {
      out.samples.push_back(zig_sample(t, src, alu).value);
    }
  }
  out.report = pool.report();
  out.trace = pool.trace();
  return out;
}

}  // namespace latsamp
