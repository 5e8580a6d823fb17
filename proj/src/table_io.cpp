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

#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "json.hpp"
#include "latsamp/ziggurat.hpp"

namespace latsamp {

namespace {

nlohmann::json encode(const Wide& v) {
  if (v >= 0 && v <= Wide(std::numeric_limits<u64>::max())) {
    return static_cast<u64>(v);
  }
  if (v < 0 && v >= Wide(std::numeric_limits<i64>::min())) {
    return static_cast<i64>(v);
  }
  return v.str();
}

Wide decode(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return Wide(j.get<u64>());
  if (j.is_number_integer()) return Wide(j.get<i64>());
  if (j.is_string()) return Wide(j.get<std::string>());
  throw std::runtime_error("expected an integer in Ziggurat table");
}

nlohmann::json encode_all(const std::vector<Wide>& v, std::size_t from = 0) {
  nlohmann::json a = nlohmann::json::array();
  for (std::size_t i = from; i < v.size(); ++i) a.push_back(encode(v[i]));
  return a;
}

}  // namespace

void write_ziggurat_json(std::ostream& out, const ZigguratTable& t) {
  nlohmann::json j;
  j["m"] = t.m;
  j["lambda"] = t.lambda();
  j["sigma"] = t.gauss.sigma;
  j["x_floor"] = t.x_floor;
  j["y_bar_raw"] = encode_all(t.y_bar_raw);
  // Slopes for rectangles 1..m; undefined slopes are written as the -1 flag.
  nlohmann::json slopes = nlohmann::json::array();
  for (std::size_t i = 1; i <= t.m; ++i) {
    slopes.push_back(t.slope_defined[i] ? encode(t.slope_k_raw[i]) : nlohmann::json(-1));
  }
  j["slope_k_raw"] = slopes;
  nlohmann::json cls = nlohmann::json::array();
  for (std::size_t i = 1; i <= t.m; ++i) cls.push_back(static_cast<int>(t.sigma_class[i]));
  j["sigma_class"] = cls;
  j["px_raw"] = encode_all(t.px_raw);
  out << j.dump() << "\n";
}

ZigguratTable read_ziggurat_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
    ZigguratTable t;
    t.m = j.at("m").get<std::size_t>();
    const auto lambda = j.at("lambda").get<unsigned>();
    const auto sigma = j.at("sigma").get<double>();
    t.x_floor = j.at("x_floor").get<std::vector<i64>>();
    if (t.m < 2 || t.x_floor.size() != t.m + 1) {
      throw std::runtime_error("x_floor length does not match m");
    }
    t.gauss = make_gaussian_params(sigma, 9, lambda);
    t.gauss.max_value = t.x_floor.back();
    for (const auto& v : j.at("y_bar_raw")) t.y_bar_raw.push_back(decode(v));
    t.slope_k_raw.assign(1, Wide(0));
    t.slope_defined.assign(1, 0);
    const auto& slopes = j.at("slope_k_raw");
    const auto& cls = j.at("sigma_class");
    if (slopes.size() != t.m || cls.size() != t.m) {
      throw std::runtime_error("slope/sigma_class length does not match m");
    }
    t.sigma_class.assign(1, SigmaClass::kStraddle);
    for (std::size_t i = 1; i <= t.m; ++i) {
      const bool defined = t.x_floor[i] != t.x_floor[i - 1];
      t.slope_defined.push_back(defined ? 1 : 0);
      t.slope_k_raw.push_back(defined ? decode(slopes[i - 1]) : Wide(0));
      const int c = cls[i - 1].get<int>();
      if (c < 0 || c > 2) throw std::runtime_error("sigma_class out of range");
      t.sigma_class.push_back(static_cast<SigmaClass>(c));
    }
    for (const auto& v : j.at("px_raw")) t.px_raw.push_back(decode(v));
    t.finalize();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed Ziggurat table: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("invalid Ziggurat table: ") + e.what());
  }
}

}  // namespace latsamp
