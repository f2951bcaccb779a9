// Copyright (c) 2026, The thermbd Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "thermbd/run_config.hpp"

#include <algorithm>
#include <initializer_list>

#include "json.hpp"
#include "thermbd/dataset.hpp"
#include "thermbd/error.hpp"

namespace thermbd {

using json = nlohmann::ordered_json;

namespace {

void allow_keys(const json &j, std::string_view where, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) throw Error(Errc::kConfig, std::string(where) + ": expected an object");
  for (const auto &item : j.items()) {
    if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
      throw Error(Errc::kConfig, std::string(where) + ": unknown key '" + item.key() + "'");
    }
  }
}

std::uint8_t pixel_of(const json &j, std::string_view where) {
  const int v = j.get<int>();
  if (v < 0 || v > 255) throw Error(Errc::kConfig, std::string(where) + ": pixel level outside [0,255]");
  return static_cast<std::uint8_t>(v);
}

TriggerShape parse_shape(const std::string &s) {
  if (s == "bbox_block") return TriggerShape::kBboxBlock;
  if (s == "strip") return TriggerShape::kStrip;
  if (s == "block") return TriggerShape::kBlock;
  throw Error(Errc::kConfig, "unknown trigger shape '" + s + "'");
}

TriggerSpec parse_trigger(const json &j, TriggerShape default_shape, std::string_view where) {
  allow_keys(j, where, {"shape", "pixel", "temperature_c", "lambda", "offset", "center", "width", "height"});
  TriggerSpec t;
  t.shape = parse_shape(j.value("shape", std::string(default_shape == TriggerShape::kBboxBlock ? "bbox_block"
                                                     : default_shape == TriggerShape::kStrip    ? "strip"
                                                                                                : "block")));
  if (t.shape == TriggerShape::kBlock) t.width = t.height = 60;
  if (j.contains("pixel") && j.contains("temperature_c")) {
    throw Error(Errc::kConfig, std::string(where) + ": give either pixel or temperature_c, not both");
  }
  if (j.contains("pixel")) t.intensity = PixelValue{j.at("pixel").get<int>()};
  if (j.contains("temperature_c")) t.intensity = Celsius{j.at("temperature_c").get<double>()};
  t.lambda = j.value("lambda", t.lambda);
  if (j.contains("offset")) {
    const auto off = j.at("offset").get<std::vector<double>>();
    if (off.size() != 2) throw Error(Errc::kConfig, std::string(where) + ": offset must be [dx, dy]");
    t.offset_x = off[0];
    t.offset_y = off[1];
  }
  if (j.contains("center")) {
    const auto c = j.at("center").get<std::vector<double>>();
    if (c.size() != 2) throw Error(Errc::kConfig, std::string(where) + ": center must be [a, b]");
    t.center_x = c[0];
    t.center_y = c[1];
  }
  t.width = j.value("width", t.width);
  t.height = j.value("height", t.height);
  return t;
}

OaaConfig parse_oaa(const json &j, std::uint64_t seed) {
  allow_keys(j, "oaa", {"goal", "q", "trigger", "active_range", "adversarial_ratio", "adversarial_trigger"});
  OaaConfig c;
  c.seed = seed;
  c.goal = parse_goal(j.value("goal", std::string("misclassify")));
  c.q = j.value("q", c.q);
  if (j.contains("trigger")) c.trigger = parse_trigger(j.at("trigger"), TriggerShape::kBboxBlock, "oaa.trigger");
  if (j.contains("active_range")) {
    const auto r = j.at("active_range").get<std::vector<int>>();
    if (r.size() != 2) throw Error(Errc::kConfig, "oaa.active_range must be [p1, p2]");
    c.range_lo = r[0];
    c.range_hi = r[1];
  }
  c.adversarial_ratio = j.value("adversarial_ratio", 0.0);
  if (j.contains("adversarial_trigger")) {
    TriggerSpec adv = parse_trigger(j.at("adversarial_trigger"), TriggerShape::kBboxBlock, "oaa.adversarial_trigger");
    // Unspecified geometry follows the normal trigger.
    const json &a = j.at("adversarial_trigger");
    if (!a.contains("lambda")) adv.lambda = c.trigger.lambda;
    if (!a.contains("offset")) {
      adv.offset_x = c.trigger.offset_x;
      adv.offset_y = c.trigger.offset_y;
    }
    c.adversarial_trigger = adv;
  }
  c.validate();
  return c;
}

RaaConfig parse_raa(const json &j, std::uint64_t seed, RunConfig &run) {
  allow_keys(j, "raa", {"goal", "trigger", "radius_table", "ratios", "test_radius", "test_pixel", "out_of_range_pixel"});
  RaaConfig c;
  c.seed = seed;
  c.goal = parse_goal(j.value("goal", std::string("misclassify")));
  if (j.contains("trigger")) c.trigger = parse_trigger(j.at("trigger"), TriggerShape::kStrip, "raa.trigger");
  std::vector<std::pair<std::uint8_t, double>> table;
  for (const auto &row : j.at("radius_table")) {
    if (!row.is_array() || row.size() != 2) throw Error(Errc::kConfig, "raa.radius_table rows must be [pixel, radius]");
    table.emplace_back(pixel_of(row[0], "raa.radius_table"), row[1].get<double>());
  }
  c.radius_table = RadiusTable(std::move(table));
  for (const auto &row : j.value("ratios", json::array())) {
    if (!row.is_array() || row.size() != 2) throw Error(Errc::kConfig, "raa.ratios rows must be [pixel, q]");
    c.ratios.push_back(PixelRatio{pixel_of(row[0], "raa.ratios"), row[1].get<double>()});
  }
  c.test_radius = j.value("test_radius", c.radius_table.max_radius());
  if (j.contains("test_pixel")) run.raa_test_pixel = pixel_of(j.at("test_pixel"), "raa.test_pixel");
  if (j.contains("out_of_range_pixel")) {
    run.raa_out_of_range_pixel = pixel_of(j.at("out_of_range_pixel"), "raa.out_of_range_pixel");
  }
  c.validate();
  return c;
}

ThermalMap thermal_map_from(const json &j, const std::filesystem::path &base_dir) {
  allow_keys(j, "thermal_map", {"lambda", "phi", "m", "calibration_csv"});
  const double m = j.value("m", 4.0);
  if (j.contains("calibration_csv")) {
    if (j.contains("lambda") || j.contains("phi")) {
      throw Error(Errc::kConfig, "thermal_map: give coefficients or calibration_csv, not both");
    }
    return fit(load_calibration_csv(base_dir / j.at("calibration_csv").get<std::string>()), m);
  }
  ThermalMap map;
  map.lambda_coeff = j.at("lambda").get<double>();
  map.phi_offset = j.at("phi").get<double>();
  map.exponent_m = m;
  if (!(map.lambda_coeff > 0.0)) throw Error(Errc::kNonMonotoneCalibration, "thermal_map: lambda must be positive");
  return map;
}

}  // namespace

AttackGoal RunConfig::goal() const {
  if (eval_goal) return *eval_goal;
  if (mode == AttackMode::kOaa && oaa) return oaa->goal;
  if (mode == AttackMode::kRaa && raa) return raa->goal;
  return AttackGoal::kMisclassify;
}

EvalConfig RunConfig::eval_config(const ClassMap &classes) const {
  EvalConfig e;
  e.iou_threshold = iou_threshold;
  e.source_class = classes.source();
  e.target_class = classes.target();
  e.goal = goal();
  for (const auto &name : map_classes) {
    const int id = classes.id_of(name);
    if (id < 0) throw Error(Errc::kConfig, "eval.map_classes: unknown class '" + name + "'");
    e.map_classes.push_back(id);
  }
  e.validate();
  return e;
}

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path &base_dir) {
  try {
    const json j = json::parse(json_text);
    allow_keys(j, "config", {"dataset", "output", "source_class", "target_class", "thermal_map", "mode",
                             "poison_split", "test_split", "seed", "threads", "oaa", "raa", "eval"});
    RunConfig c;
    c.dataset = base_dir / j.at("dataset").get<std::string>();
    c.output = base_dir / j.value("output", std::string("out"));
    if (j.contains("source_class")) c.source_class = j.at("source_class").get<std::string>();
    if (j.contains("target_class")) c.target_class = j.at("target_class").get<std::string>();
    if (j.contains("thermal_map")) c.thermal_map = thermal_map_from(j.at("thermal_map"), base_dir);
    c.poison_split = j.value("poison_split", c.poison_split);
    c.test_split = j.value("test_split", c.test_split);
    c.seed = j.value("seed", std::uint64_t{0});
    c.threads = j.value("threads", 1);

    if (j.contains("oaa") && j.contains("raa")) throw Error(Errc::kConfig, "config: give exactly one of oaa / raa");
    const std::string mode = j.value("mode", std::string(j.contains("raa") ? "raa" : "oaa"));
    if (mode == "oaa") {
      c.mode = AttackMode::kOaa;
      if (!j.contains("oaa")) throw Error(Errc::kConfig, "config: mode oaa needs an \"oaa\" block");
      c.oaa = parse_oaa(j.at("oaa"), c.seed);
    } else if (mode == "raa") {
      c.mode = AttackMode::kRaa;
      if (!j.contains("raa")) throw Error(Errc::kConfig, "config: mode raa needs a \"raa\" block");
      c.raa = parse_raa(j.at("raa"), c.seed, c);
    } else {
      throw Error(Errc::kConfig, "config: unknown mode '" + mode + "'");
    }

    if (j.contains("eval")) {
      const json &e = j.at("eval");
      allow_keys(e, "eval", {"iou_threshold", "goal", "map_classes"});
      c.iou_threshold = e.value("iou_threshold", c.iou_threshold);
      if (e.contains("goal")) c.eval_goal = parse_goal(e.at("goal").get<std::string>());
      c.map_classes = e.value("map_classes", std::vector<std::string>{});
    }
    if (!(c.iou_threshold > 0.0 && c.iou_threshold < 1.0)) {
      throw Error(Errc::kConfig, "eval.iou_threshold must be in (0, 1)");
    }
    return c;
  } catch (const json::exception &e) {
    throw Error(Errc::kConfig, std::string("config: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path &path) {
  return parse_run_config(read_text(path), path.parent_path());
}

ThermalMap parse_thermal_map_json(std::string_view json_text) {
  try {
    json j = json::parse(json_text);
    if (j.contains("thermal_map")) j = j.at("thermal_map");
    return thermal_map_from(j, {});
  } catch (const json::exception &e) {
    throw Error(Errc::kConfig, std::string("thermal_map: ") + e.what());
  }
}

std::string thermal_map_json(const ThermalMap &map) {
  json j;
  j["thermal_map"] = {{"lambda", map.lambda_coeff}, {"phi", map.phi_offset}, {"m", map.exponent_m}};
  return j.dump(2) + "\n";
}

}  // namespace thermbd
