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

// latsamp: table generation, sampling, NTT products, RLWE demo, validation
// and integrated/standalone resource runs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <bit>
#include <future>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "latsamp/datapath.hpp"
#include "latsamp/knuth_yao.hpp"
#include "latsamp/ntt.hpp"
#include "latsamp/rlwe.hpp"
#include "latsamp/stats.hpp"
#include "latsamp/ziggurat.hpp"

namespace {

using namespace latsamp;

struct Options {
  std::string alg = "ky";
  std::string params = "LP";
  std::string table;
  std::string out;
  std::string report;
  std::string mode = "integrated";
  std::string a_path, b_path, samples_path;
  std::size_t m = 64;
  std::size_t count = 1000;
  std::size_t workers = 1;
  std::size_t trials = 1;
  u64 seed = 0;
};

SamplerAlg parse_alg(const std::string& s) {
  return s == "ky" ? SamplerAlg::kKnuthYao : SamplerAlg::kZiggurat;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text, bool binary = false) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int gen_tables(const Options& o) {
  const ParameterSet ps = load_parameter_set(o.params);
  std::ostringstream buf;
  if (parse_alg(o.alg) == SamplerAlg::kKnuthYao) {
    write_kypm(buf, build_probability_matrix(ps.gauss));
  } else {
    write_ziggurat_json(buf, build_ziggurat_table(ps.gauss, o.m));
  }
  emit(o.out, buf.str(), true);
  return 0;
}

int sample(const Options& o) {
  std::shared_ptr<ProbabilityMatrix> ky;
  std::shared_ptr<ZigguratTable> zig;
  const bool is_ky = parse_alg(o.alg) == SamplerAlg::kKnuthYao;
  if (!o.table.empty()) {
    std::ifstream in = open_in(o.table, is_ky);
    if (is_ky) {
      ky = std::make_shared<ProbabilityMatrix>(read_kypm(in));
    } else {
      zig = std::make_shared<ZigguratTable>(read_ziggurat_json(in));
    }
  } else {
    const ParameterSet ps = load_parameter_set(o.params);
    if (is_ky) {
      ky = std::make_shared<ProbabilityMatrix>(build_probability_matrix(ps.gauss));
    } else {
      zig = std::make_shared<ZigguratTable>(build_ziggurat_table(ps.gauss, o.m));
    }
  }
  const std::size_t k = std::max<std::size_t>(1, o.workers);
  std::vector<std::future<std::vector<i64>>> shards;
  for (std::size_t w = 0; w < k; ++w) {
    const std::size_t n = o.count / k + (w < o.count % k ? 1 : 0);
    shards.push_back(std::async(std::launch::async, [&, w, n] {
      BitSource src(o.seed + w);
      std::vector<i64> v;
      v.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        v.push_back(is_ky ? ky_sample(*ky, src).value : zig_sample(*zig, src).value);
      }
      return v;
    }));
  }
  std::string text;
  for (auto& f : shards) {
    for (i64 v : f.get()) {
      text += std::to_string(v);
      text += '\n';
    }
  }
  emit(o.out, text);
  return 0;
}

int ntt_mul(const Options& o) {
  const ParameterSet ps = load_parameter_set(o.params);
  std::ifstream fa = open_in(o.a_path), fb = open_in(o.b_path);
  const Polynomial a = read_polynomial(fa), b = read_polynomial(fb);
  if (a.size() != ps.ring.n || a.modulus() != ps.ring.q.value) {
    throw std::runtime_error("polynomial does not match the parameter set");
  }
  const NttPlan plan(ps.ring);
  std::ostringstream buf;
  write_polynomial(buf, poly_mul(a, b, plan));
  emit(o.out, buf.str());
  return 0;
}

void save_polynomial(const std::string& dir, const std::string& name,
                     const Polynomial& p) {
  std::ostringstream buf;
  write_polynomial(buf, p);
  emit(dir + "/" + name + ".txt", buf.str());
}

int demo_rlwe(const Options& o) {
  const ParameterSet ps = load_parameter_set(o.params);
  const GaussianPolySampler sampler(ps, parse_alg(o.alg), o.m);
  const NttPlan plan(ps.ring);
  BitSource src(o.seed);
  std::size_t ok = 0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const RlweSample s = make_rlwe_sample(sampler, plan, src);
    const bool exact = (s.pair.b - poly_mul(s.pair.a, s.secret, plan)) == s.error;
    Polynomial msg(ps.ring.n, ps.ring.q.value);
    for (std::size_t i = 0; i < msg.size(); ++i) msg.set(i, src.next_bit() ? 1 : 0);
    const Ciphertext ct = encrypt(s.pair, msg, sampler, plan, src);
    const bool round_trip = decrypt(s.secret, ct, plan) == msg;
    ok += round_trip ? 1 : 0;
    std::cout << "trial " << t << ": keygen b-a*s==e " << (exact ? "ok" : "FAIL")
              << ", round trip " << (round_trip ? "ok" : "FAIL") << '\n';
    if (!o.out.empty() && t == 0) {
      std::filesystem::create_directories(o.out);
      save_polynomial(o.out, "pk_a", s.pair.a);
      save_polynomial(o.out, "pk_b", s.pair.b);
      save_polynomial(o.out, "sk", s.secret);
      save_polynomial(o.out, "c1", ct.c1);
      save_polynomial(o.out, "c2", ct.c2);
      save_polynomial(o.out, "msg", msg);
    }
  }
  std::cout << ps.name << " " << o.alg << ": " << ok << "/" << o.trials
            << " round trips\n";
  return ok == o.trials ? 0 : 1;
}

int validate(const Options& o) {
  const ParameterSet ps = load_parameter_set(o.params);
  std::ifstream in = open_in(o.samples_path);
  EmpiricalHistogram h(ps.gauss.max_value);
  i64 v = 0;
  while (in >> v) h.add(v);
  const TargetDistribution t(ps.gauss.sigma, ps.gauss.max_value);
  emit(o.report, stats_json(h, t) + "\n");
  return 0;
}

int run(const Options& o) {
  const ParameterSet ps = load_parameter_set(o.params);
  const SamplerAlg alg = parse_alg(o.alg);
  std::optional<ProbabilityMatrix> ky;
  std::optional<ZigguratTable> zig;
  if (alg == SamplerAlg::kKnuthYao) {
    ky = build_probability_matrix(ps.gauss);
  } else {
    zig = build_ziggurat_table(ps.gauss, o.m);
  }
  const SamplerTables tables{ky ? &*ky : nullptr, zig ? &*zig : nullptr};
  const RunMode mode = o.mode == "integrated" ? RunMode::kIntegrated : RunMode::kStandalone;
  RunOptions ro;
  ro.zig_rectangles = o.m;
  const RunResult r = run_sampler(mode, alg, ps, tables, o.count, o.seed, ro);
  emit(o.report, r.report.to_json() + "\n");
  if (!o.out.empty()) {
    std::string text;
    for (i64 s : r.samples) text += std::to_string(s) + "\n";
    emit(o.out, text);
  }
  return 0;
}

int resources(const Options& o) {
  const ParameterSet ps = load_parameter_set(o.params);
  DatapathPool pool(ps.ring);
  const unsigned x_bits = std::bit_width(static_cast<u64>(ps.gauss.max_value));
  const unsigned w = pool.unit_width();
  const unsigned limbs = (ps.gauss.lambda + x_bits + w - 1) / w;
  pool.configure_for_sampling(
      std::min<std::size_t>(limbs > 2 ? limbs - 2 : 0, pool.ntt_unit_count() - 1));
  const WideMulPlan p = pool.make_wide_mul_plan(ps.gauss.lambda, x_bits);
  nlohmann::json units = nlohmann::json::array();
  for (const DatapathUnit& u : pool.units()) {
    units.push_back({{"id", u.id},
                     {"kind", u.kind == UnitKind::kNttStage ? "ntt_stage" : "pre_ntt_mul"},
                     {"sampling_mode", to_string(u.mode)},
                     {"width", u.width}});
  }
  nlohmann::json j = {
      {"params", ps.name},
      {"n", ps.ring.n},
      {"q", ps.ring.q.value},
      {"units", units},
      {"sline_plan",
       {{"wide_width", p.wide_width},
        {"small_width", p.small_width},
        {"limb_width", p.limb_width},
        {"num_limbs", p.num_limbs},
        {"partial_width", p.partial_width},
        {"num_carry_adds", p.num_carry_adds},
        {"mul_units", p.mul_units},
        {"add_units", p.add_units}}},
  };
  emit(o.out, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Gaussian samplers on a reconfigurable NTT datapath"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> algs{"ky", "zig"};

  auto add_params = [&](CLI::App* c) {
    c->add_option("--params", o.params, "LP, BLISS or a parameter JSON file");
  };
  auto add_seed = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--seed", o.seed, "u64 seed");
    if (required) opt->required();
  };

  auto* gen = app.add_subcommand("gen-tables", "Build a sampler table");
  gen->add_option("--alg", o.alg)->check(CLI::IsMember(algs));
  add_params(gen);
  add_seed(gen, false);
  gen->add_option("--m", o.m, "Ziggurat rectangles");
  gen->add_option("--out", o.out)->required();

  auto* smp = app.add_subcommand("sample", "Draw samples, one per line");
  smp->add_option("--alg", o.alg)->check(CLI::IsMember(algs));
  add_params(smp);
  smp->add_option("--table", o.table, "KYPM or Ziggurat JSON table");
  smp->add_option("--m", o.m);
  smp->add_option("--count", o.count);
  add_seed(smp, true);
  smp->add_option("--workers", o.workers, "shards seeded seed+index");
  smp->add_option("--out", o.out);

  auto* ntt = app.add_subcommand("ntt-mul", "Negacyclic product of two polynomials");
  add_params(ntt);
  add_seed(ntt, false);
  ntt->add_option("--a", o.a_path)->required();
  ntt->add_option("--b", o.b_path)->required();
  ntt->add_option("--out", o.out);

  auto* demo = app.add_subcommand("demo-rlwe", "Keygen, encrypt, decrypt");
  add_params(demo);
  demo->add_option("--sampler", o.alg)->check(CLI::IsMember(algs));
  demo->add_option("--m", o.m);
  demo->add_option("--trials", o.trials);
  add_seed(demo, true);
  demo->add_option("--out", o.out, "directory for key/ciphertext files");

  auto* val = app.add_subcommand("validate", "Compare samples with the target");
  add_params(val);
  add_seed(val, false);
  val->add_option("--samples", o.samples_path)->required();
  val->add_option("--report", o.report);

  auto* rn = app.add_subcommand("run", "Sample standalone or on the shared datapath");
  rn->add_option("--mode", o.mode)->check(CLI::IsMember({"integrated", "standalone"}));
  rn->add_option("--alg", o.alg)->check(CLI::IsMember(algs));
  add_params(rn);
  rn->add_option("--m", o.m);
  rn->add_option("--count", o.count);
  add_seed(rn, true);
  rn->add_option("--report", o.report);
  rn->add_option("--out", o.out, "samples file");

  auto* res = app.add_subcommand("resources", "Pool layout and wide-multiply plan");
  add_params(res);
  add_seed(res, false);
  res->add_option("--out", o.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) return gen_tables(o);
    if (*smp) return sample(o);
    if (*ntt) return ntt_mul(o);
    if (*demo) return demo_rlwe(o);
    if (*val) return validate(o);
    if (*rn) return run(o);
    if (*res) return resources(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
