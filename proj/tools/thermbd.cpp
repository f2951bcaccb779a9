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

// thermbd: poison thermal-infrared detection datasets with temperature-keyed
// triggers and score attacks from external detector outputs.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "thermbd/dataset.hpp"
#include "thermbd/error.hpp"
#include "thermbd/pipeline.hpp"

namespace {

using namespace thermbd;

int threads_for(const RunConfig &cfg, int flag) { return flag > 0 ? flag : std::max(cfg.threads, 1); }

std::optional<std::uint8_t> level_flag(int value) {
  if (value < 0) return std::nullopt;
  if (value > 255) throw Error(Errc::kConfig, "pixel level must be in [0,255]");
  return static_cast<std::uint8_t>(value);
}

ClassMap generic_classes() {
  std::vector<std::string> names;
  for (int i = 0; i < 256; ++i) names.push_back(std::to_string(i));
  return ClassMap(names, "1", "0");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Thermal-infrared backdoor poisoning and evaluation toolkit"};
  app.require_subcommand(1);

  std::string csv, map_out;
  double exponent = 4.0;
  auto *fit_cmd = app.add_subcommand("fit-map", "Fit pixel = lambda * T^m + phi from a temperature,pixel CSV");
  fit_cmd->add_option("--csv", csv, "Calibration samples")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--m", exponent, "Exponent m")->capture_default_str();
  fit_cmd->add_option("--out", map_out, "Write the thermal_map block here instead of stdout");

  std::string config;
  int threads = 0;
  auto *poison_cmd = app.add_subcommand("poison", "Write a poisoned copy of the training split");
  poison_cmd->add_option("--config", config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
  poison_cmd->add_option("--threads", threads, "Worker threads (1 = serial reference path)");

  std::string test_out, variant = "in-range";
  int intensity = -1;
  double test_radius = -1.0;
  auto *test_cmd = app.add_subcommand("make-testset", "Write a triggered copy of the test split");
  test_cmd->add_option("--config", config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
  test_cmd->add_option("--out", test_out, "Output root")->required();
  test_cmd->add_option("--variant", variant, "Trigger level source")
      ->check(CLI::IsMember({"in-range", "out-of-range"}))
      ->capture_default_str();
  test_cmd->add_option("--intensity", intensity, "Explicit trigger pixel level");
  test_cmd->add_option("--test-radius", test_radius, "RAA evaluation radius in pixels");
  test_cmd->add_option("--threads", threads, "Worker threads (1 = serial reference path)");

  std::string gt, clean_dir, backdoor_clean_dir, backdoor_trig_dir, triggers_dir, report_out;
  auto *eval_cmd = app.add_subcommand("evaluate", "Compute ASR, AP/mAP and BAF from detection files");
  eval_cmd->add_option("--config", config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--gt", gt, "Ground-truth label directory")->required();
  eval_cmd->add_option("--clean-model", clean_dir, "Clean model on clean images")->required();
  eval_cmd->add_option("--backdoor-clean", backdoor_clean_dir, "Backdoor model on clean images")->required();
  eval_cmd->add_option("--backdoor-triggered", backdoor_trig_dir, "Backdoor model on triggered images")->required();
  eval_cmd->add_option("--triggers", triggers_dir, "Sidecar directory of the triggered test set");
  eval_cmd->add_option("--out", report_out, "Report JSON path");
  eval_cmd->add_option("--threads", threads, "Worker threads (1 = serial reference path)");

  std::string image, labels, manifest_root;
  double lambda = 0.04;
  auto *inspect_cmd = app.add_subcommand("inspect", "Dump image statistics, boxes and OAA stamp placement");
  inspect_cmd->add_option("--image", image, "PGM image")->required()->check(CLI::ExistingFile);
  inspect_cmd->add_option("--labels", labels, "Label file");
  inspect_cmd->add_option("--dataset", manifest_root, "Dataset root holding manifest.json");
  inspect_cmd->add_option("--lambda", lambda, "Trigger area fraction")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit_cmd) {
      const ThermalMap map = fit_map_from_csv(csv, exponent);
      const std::string text = thermal_map_json(map);
      if (map_out.empty()) {
        std::cout << text;
      } else {
        write_text(map_out, text);
      }
    } else if (*poison_cmd) {
      const RunConfig cfg = load_run_config(config);
      const PoisonSummary s = run_poison(cfg, ExecPolicy{threads_for(cfg, threads)});
      std::cout << "poisoned " << s.normal << " normal + " << s.adversarial << " adversarial of " << s.images
                << " images -> " << cfg.output.string() << "\n";
      if (s.min_size_stamps > 0) std::cerr << "note: " << s.min_size_stamps << " stamps raised to 1x1\n";
    } else if (*test_cmd) {
      const RunConfig cfg = load_run_config(config);
      TestsetOptions opts;
      opts.out = test_out;
      opts.variant = variant == "in-range" ? TestVariant::kInRange : TestVariant::kOutOfRange;
      opts.intensity = level_flag(intensity);
      if (test_radius > 0.0) opts.test_radius = test_radius;
      const TestsetSummary s = run_make_testset(cfg, opts, ExecPolicy{threads_for(cfg, threads)});
      std::cout << "triggered " << s.triggered << " of " << s.images << " images at level " << int(s.pixel)
                << " -> " << test_out << "\n";
    } else if (*eval_cmd) {
      const RunConfig cfg = load_run_config(config);
      EvaluateInputs in{gt, clean_dir, backdoor_clean_dir, backdoor_trig_dir, std::nullopt};
      if (!triggers_dir.empty()) in.triggers = triggers_dir;
      const EvalReport report = run_evaluate(cfg, in, ExecPolicy{threads_for(cfg, threads)});
      const ClassMap classes = resolve_class_map(cfg);
      const EvalConfig ecfg = cfg.eval_config(classes);
      for (const auto &w : report.warnings) std::cerr << "warning: " << w << "\n";
      write_text(report_out.empty() ? cfg.output / "eval_report.json" : std::filesystem::path(report_out),
                 report_json(report, ecfg, classes));
      std::cout << report_table(report, ecfg, classes);
    } else if (*inspect_cmd) {
      const ClassMap classes = manifest_root.empty() ? generic_classes() : load_manifest(manifest_root).class_map();
      std::optional<std::filesystem::path> label_file;
      if (!labels.empty()) label_file = labels;
      std::cout << inspect(image, label_file, classes, lambda);
    }
  } catch (const Error &e) {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
