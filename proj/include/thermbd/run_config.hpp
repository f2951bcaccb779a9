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

#ifndef THERMBD_RUN_CONFIG_HPP_
#define THERMBD_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "thermbd/metrics.hpp"
#include "thermbd/poison_oaa.hpp"
#include "thermbd/poison_raa.hpp"
#include "thermbd/thermal_map.hpp"

namespace thermbd {

enum class AttackMode { kOaa, kRaa };

/// Everything a poison / make-testset / evaluate invocation needs, read from
/// one JSON file. Relative paths resolve against the config file's directory.
struct RunConfig {
  std::filesystem::path dataset;
  std::filesystem::path output;
  std::optional<std::string> source_class;
  std::optional<std::string> target_class;
  ThermalMap thermal_map = kReferenceMap;
  AttackMode mode = AttackMode::kOaa;
  std::string poison_split = "train";
  std::string test_split = "test";
  std::uint64_t seed = 0;
  int threads = 1;

  std::optional<OaaConfig> oaa;
  std::optional<RaaConfig> raa;
  /// RAA out-of-range test level (a level outside the radius table).
  std::optional<std::uint8_t> raa_out_of_range_pixel;
  /// RAA level used by in-range test sets; defaults to the first table entry.
  std::optional<std::uint8_t> raa_test_pixel;

  double iou_threshold = 0.5;
  std::optional<AttackGoal> eval_goal;
  std::vector<std::string> map_classes;

  /// Builds the evaluation config against a class map.
  EvalConfig eval_config(const ClassMap &classes) const;
  AttackGoal goal() const;
};

/// Throws kConfig on schema violations (unknown keys included).
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path &base_dir = {});
RunConfig load_run_config(const std::filesystem::path &path);

/// Parses a {"lambda", "phi", "m"} object.
ThermalMap parse_thermal_map_json(std::string_view json_text);
std::string thermal_map_json(const ThermalMap &map);

}  // namespace thermbd

#endif  // THERMBD_RUN_CONFIG_HPP_
