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

#ifndef THERMBD_PIPELINE_HPP_
#define THERMBD_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "thermbd/kernels.hpp"
#include "thermbd/metrics.hpp"
#include "thermbd/run_config.hpp"

namespace thermbd {

ClassMap resolve_class_map(const RunConfig &cfg);

/// Reads a "temperature,pixel" CSV and fits the response with exponent m.
ThermalMap fit_map_from_csv(const std::filesystem::path &csv, double m);

struct PoisonSummary {
  std::size_t images = 0;
  std::size_t normal = 0;
  std::size_t adversarial = 0;
  std::size_t min_size_stamps = 0;
};

/// Writes the poisoned dataset (plus plan.json) to cfg.output. Every config
/// contradiction is reported before anything is written; the input tree is
/// never modified.
PoisonSummary run_poison(const RunConfig &cfg, ExecPolicy policy);

enum class TestVariant { kInRange, kOutOfRange };

struct TestsetOptions {
  std::filesystem::path out;
  TestVariant variant = TestVariant::kInRange;
  /// Explicit trigger level; wins over the variant.
  std::optional<std::uint8_t> intensity;
  std::optional<double> test_radius;
};

struct TestsetSummary {
  std::size_t images = 0;
  std::size_t triggered = 0;
  std::uint8_t pixel = 0;
};

/// Triggers the test split into opts.out with labels untouched and one
/// sidecar per triggered image under triggers/<split>/.
TestsetSummary run_make_testset(const RunConfig &cfg, const TestsetOptions &opts, ExecPolicy policy);

struct EvaluateInputs {
  std::filesystem::path ground_truth;        // label directory
  std::filesystem::path clean_model;         // clean model on clean images
  std::filesystem::path backdoor_clean;      // backdoor model on clean images
  std::filesystem::path backdoor_triggered;  // backdoor model on triggered images
  std::optional<std::filesystem::path> triggers;  // sidecar directory
};

EvalReport run_evaluate(const RunConfig &cfg, const EvaluateInputs &in, ExecPolicy policy);

std::string report_json(const EvalReport &report, const EvalConfig &cfg, const ClassMap &classes);
std::string report_table(const EvalReport &report, const EvalConfig &cfg, const ClassMap &classes);

/// Human-readable dump of an image, its labels, and the OAA stamps they would get.
std::string inspect(const std::filesystem::path &image, const std::optional<std::filesystem::path> &labels,
                    const ClassMap &classes, double lambda);

}  // namespace thermbd

#endif  // THERMBD_PIPELINE_HPP_
