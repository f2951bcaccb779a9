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

#include "thermbd/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "thermbd/dataset.hpp"
#include "thermbd/error.hpp"

namespace thermbd {

using json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kChunk = 128;
constexpr const char *kPlanName = "plan.json";
constexpr const char *kTestsetName = "testset.json";

json stamp_json(const Stamp &s) {
  return json{{"left", s.left}, {"top", s.top}, {"width", s.width}, {"height", s.height}, {"value", s.value}};
}

json edit_json(const ObjectEdit &e) {
  json j{{"index", e.index}, {"from", e.from_class}, {"action", to_string(e.action)}};
  if (e.action == EditAction::kRelabeled) j["to"] = e.to_class;
  return j;
}

json plan_json(const PoisonPlan &plan, const std::string &split) {
  json j;
  j["mode"] = plan.mode;
  j["seed"] = plan.seed;
  j["split"] = split;
  j["images"] = plan.entries.size();
  j["normal"] = plan.count(PoisonRole::kNormal);
  j["adversarial"] = plan.count(PoisonRole::kAdversarial);
  json entries = json::array();
  for (const auto &e : plan.entries) {
    json je{{"id", e.image_id}, {"role", to_string(e.role)}};
    if (e.role != PoisonRole::kClean) {
      if (e.pixel_level >= 0) je["pixel_level"] = e.pixel_level;
      je["stamps"] = json::array();
      for (const auto &s : e.stamps) je["stamps"].push_back(stamp_json(s));
      je["edits"] = json::array();
      for (const auto &ed : e.edits) je["edits"].push_back(edit_json(ed));
      if (e.min_size_stamps > 0) je["min_size_stamps"] = e.min_size_stamps;
    }
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  return j;
}

// Builds the tree in a sibling staging directory and moves it into place only
// after fn succeeds.
void build_output(const fs::path &out, const fs::path &input_root, const std::string &marker,
                  const std::function<void(const fs::path &)> &fn) {
  prepare_output(out, input_root, marker);
  fs::path staging = out;
  staging += ".partial";
  fs::remove_all(staging);
  fs::create_directories(staging);
  try {
    fn(staging);
  } catch (...) {
    fs::remove_all(staging);
    throw;
  }
  fs::remove_all(out);
  fs::rename(staging, out);
}

void copy_if_exists(const fs::path &from, const fs::path &to) {
  if (fs::exists(from)) copy_exact(from, to);
}

std::vector<ImageEdit> run_oaa_kernel(std::span<const ImageSample> batch, std::span<const PoisonRole> roles,
                                      const OaaConfig &cfg, const ClassMap &classes, const ThermalMap *map,
                                      ExecPolicy policy) {
  if (policy.serial()) return kernels::serial::poison_oaa(batch, roles, cfg, classes, map);
  return kernels::omp::poison_oaa(batch, roles, cfg, classes, map, policy.threads);
}

std::vector<ImageEdit> run_raa_kernel(std::span<const ImageSample> batch, std::span<const int> levels,
                                      const RaaConfig &cfg, const ClassMap &classes, ExecPolicy policy) {
  if (policy.serial()) return kernels::serial::poison_raa(batch, levels, cfg, classes);
  return kernels::omp::poison_raa(batch, levels, cfg, classes, policy.threads);
}

void preflight_oaa(const OaaConfig &oaa, const ThermalMap &map) {
  oaa.validate();
  const std::uint8_t normal = resolve_intensity(oaa.trigger, &map);
  if (normal < oaa.range_lo || normal > oaa.range_hi) {
    throw Error(Errc::kConfigContradiction, "oaa: normal trigger level " + std::to_string(normal) +
                                               " lies outside the active range [" + std::to_string(oaa.range_lo) +
                                               "," + std::to_string(oaa.range_hi) + "]");
  }
  if (oaa.adversarial_trigger) {
    const std::uint8_t adv = resolve_intensity(*oaa.adversarial_trigger, &map);
    if (adv >= oaa.range_lo && adv <= oaa.range_hi) {
      throw Error(Errc::kConfigContradiction,
                  "oaa: adversarial trigger level " + std::to_string(adv) + " lies inside the active range");
    }
  }
}

}  // namespace

ClassMap resolve_class_map(const RunConfig &cfg) {
  const Manifest m = load_manifest(cfg.dataset);
  return ClassMap(m.classes, cfg.source_class.value_or(m.source_class), cfg.target_class.value_or(m.target_class));
}

ThermalMap fit_map_from_csv(const fs::path &csv, double m) { return fit(load_calibration_csv(csv), m); }

PoisonSummary run_poison(const RunConfig &cfg, ExecPolicy policy) {
  const Manifest manifest = load_manifest(cfg.dataset);
  const ClassMap classes = resolve_class_map(cfg);
  const std::vector<std::string> stems = list_stems(cfg.dataset, cfg.poison_split);
  if (std::find(manifest.splits.begin(), manifest.splits.end(), cfg.poison_split) == manifest.splits.end()) {
    throw Error(Errc::kConfig, "poison split '" + cfg.poison_split + "' not listed in the manifest");
  }

  PoisonPlan plan;
  if (cfg.mode == AttackMode::kOaa) {
    preflight_oaa(*cfg.oaa, cfg.thermal_map);
    plan = select_poison_subset(stems, cfg.oaa->q, cfg.oaa->adversarial_ratio, cfg.seed);
  } else {
    cfg.raa->validate();
    plan = select_raa_groups(stems, cfg.raa->ratios, cfg.seed);
  }

  PoisonSummary summary;
  summary.images = stems.size();
  summary.normal = plan.count(PoisonRole::kNormal);
  summary.adversarial = plan.count(PoisonRole::kAdversarial);

  build_output(cfg.output, cfg.dataset, kPlanName, [&](const fs::path &out) {
    copy_exact(cfg.dataset / kManifestName, out / kManifestName);
    for (const auto &split : manifest.splits) {
      if (split == cfg.poison_split) continue;
      copy_tree(cfg.dataset / "images" / split, out / "images" / split);
      copy_tree(cfg.dataset / "labels" / split, out / "labels" / split);
    }

    const std::string &split = cfg.poison_split;
    std::vector<std::size_t> poisoned;
    for (std::size_t i = 0; i < plan.entries.size(); ++i) {
      const auto &stem = plan.entries[i].image_id;
      if (plan.entries[i].role == PoisonRole::kClean) {
        copy_exact(image_path(cfg.dataset, split, stem), image_path(out, split, stem));
        copy_if_exists(label_path(cfg.dataset, split, stem), label_path(out, split, stem));
      } else {
        poisoned.push_back(i);
      }
    }

    for (std::size_t begin = 0; begin < poisoned.size(); begin += kChunk) {
      const std::size_t end = std::min(poisoned.size(), begin + kChunk);
      std::vector<ImageSample> batch;
      std::vector<PoisonRole> roles;
      std::vector<int> levels;
      for (std::size_t k = begin; k < end; ++k) {
        const PlanEntry &e = plan.entries[poisoned[k]];
        batch.push_back(load_sample(cfg.dataset, split, e.image_id, classes));
        roles.push_back(e.role);
        levels.push_back(e.pixel_level);
      }
      const std::vector<ImageEdit> edits =
          cfg.mode == AttackMode::kOaa ? run_oaa_kernel(batch, roles, *cfg.oaa, classes, &cfg.thermal_map, policy)
                                       : run_raa_kernel(batch, levels, *cfg.raa, classes, policy);
      for (std::size_t k = begin; k < end; ++k) {
        PlanEntry &e = plan.entries[poisoned[k]];
        const ImageEdit &edit = edits[k - begin];
        save_pgm(image_path(out, split, e.image_id), edit.image);
        write_text(label_path(out, split, e.image_id), emit_labels(edit.annotations));
        e.stamps = edit.stamps;
        e.edits = edit.edits;
        e.min_size_stamps = edit.min_size_stamps;
        summary.min_size_stamps += static_cast<std::size_t>(edit.min_size_stamps);
      }
    }
    write_text(out / kPlanName, plan_json(plan, split).dump(2) + "\n");
  });
  return summary;
}

TestsetSummary run_make_testset(const RunConfig &cfg, const TestsetOptions &opts, ExecPolicy policy) {
  const ClassMap classes = resolve_class_map(cfg);
  const std::string &split = cfg.test_split;
  const std::vector<std::string> stems = list_stems(cfg.dataset, split);

  // Trigger level for this variant.
  std::uint8_t pixel = 0;
  double test_radius = 0.0;
  if (cfg.mode == AttackMode::kOaa) {
    cfg.oaa->validate();
    if (opts.intensity) {
      pixel = *opts.intensity;
    } else if (opts.variant == TestVariant::kInRange) {
      pixel = resolve_intensity(cfg.oaa->trigger, &cfg.thermal_map);
    } else {
      if (!cfg.oaa->adversarial_trigger) {
        throw Error(Errc::kConfig, "out-of-range variant needs oaa.adversarial_trigger or --intensity");
      }
      pixel = resolve_intensity(*cfg.oaa->adversarial_trigger, &cfg.thermal_map);
    }
  } else {
    cfg.raa->validate();
    if (opts.intensity) {
      pixel = *opts.intensity;
    } else if (opts.variant == TestVariant::kInRange) {
      pixel = cfg.raa_test_pixel.value_or(cfg.raa->radius_table.entries().front().first);
    } else {
      if (!cfg.raa_out_of_range_pixel) {
        throw Error(Errc::kConfig, "out-of-range variant needs raa.out_of_range_pixel or --intensity");
      }
      pixel = *cfg.raa_out_of_range_pixel;
    }
    test_radius = opts.test_radius.value_or(cfg.raa->test_radius);
    if (!(test_radius > 0.0)) throw Error(Errc::kConfig, "test radius must be positive");
  }
  const char *variant = opts.variant == TestVariant::kInRange ? "in-range" : "out-of-range";

  TestsetSummary summary;
  summary.images = stems.size();
  summary.pixel = pixel;

  build_output(opts.out, cfg.dataset, kTestsetName, [&](const fs::path &out) {
    copy_exact(cfg.dataset / kManifestName, out / kManifestName);
    for (std::size_t begin = 0; begin < stems.size(); begin += kChunk) {
      const std::size_t end = std::min(stems.size(), begin + kChunk);
      std::vector<ImageSample> batch;
      for (std::size_t k = begin; k < end; ++k) batch.push_back(load_sample(cfg.dataset, split, stems[k], classes));

      std::vector<ImageEdit> edits;
      if (cfg.mode == AttackMode::kOaa) {
        edits = policy.serial()
                    ? kernels::serial::trigger_oaa(batch, *cfg.oaa, classes, &cfg.thermal_map, pixel)
                    : kernels::omp::trigger_oaa(batch, *cfg.oaa, classes, &cfg.thermal_map, pixel, policy.threads);
      } else {
        edits = policy.serial() ? kernels::serial::trigger_raa(batch, *cfg.raa, pixel)
                                : kernels::omp::trigger_raa(batch, *cfg.raa, pixel, policy.threads);
      }

      for (std::size_t k = begin; k < end; ++k) {
        const std::string &stem = stems[k];
        const ImageSample &sample = batch[k - begin];
        const ImageEdit &edit = edits[k - begin];
        copy_if_exists(label_path(cfg.dataset, split, stem), label_path(out, split, stem));
        if (edit.stamps.empty()) {
          copy_exact(image_path(cfg.dataset, split, stem), image_path(out, split, stem));
          continue;
        }
        ++summary.triggered;
        save_pgm(image_path(out, split, stem), edit.image);

        json side;
        side["id"] = stem;
        side["mode"] = cfg.mode == AttackMode::kOaa ? "oaa" : "raa";
        side["split"] = split;
        side["variant"] = variant;
        side["image_width"] = sample.image.width();
        side["image_height"] = sample.image.height();
        side["pixel"] = pixel;
        side["stamps"] = json::array();
        for (const auto &s : edit.stamps) side["stamps"].push_back(stamp_json(s));
        if (cfg.mode == AttackMode::kOaa) {
          json objs = json::array();
          for (std::size_t i = 0; i < sample.annotations.size(); ++i) {
            if (sample.annotations[i].class_id == classes.source()) objs.push_back(i);
          }
          side["stamped_objects"] = std::move(objs);
        } else {
          side["center"] = {cfg.raa->trigger.center_x, cfg.raa->trigger.center_y};
          side["test_radius"] = test_radius;
          side["in_range"] = objects_in_range(sample.annotations, sample.image.width(), sample.image.height(),
                                              cfg.raa->trigger.center_x, cfg.raa->trigger.center_y, test_radius,
                                              classes.source());
        }
        write_text(out / "triggers" / split / (stem + ".json"), side.dump(2) + "\n");
      }
    }

    json prov;
    prov["mode"] = cfg.mode == AttackMode::kOaa ? "oaa" : "raa";
    prov["variant"] = variant;
    prov["split"] = split;
    prov["pixel"] = pixel;
    if (cfg.mode == AttackMode::kRaa) prov["test_radius"] = test_radius;
    prov["images"] = summary.images;
    prov["triggered"] = summary.triggered;
    write_text(out / kTestsetName, prov.dump(2) + "\n");
  });
  return summary;
}

EvalReport run_evaluate(const RunConfig &cfg, const EvaluateInputs &in, ExecPolicy policy) {
  const ClassMap classes = resolve_class_map(cfg);
  const EvalConfig ecfg = cfg.eval_config(classes);
  if (!fs::is_directory(in.ground_truth)) {
    throw Error(Errc::kIo, "ground-truth directory " + in.ground_truth.string() + " not found");
  }

  std::vector<std::string> warnings;
  auto load_dets = [&](const fs::path &dir, const std::string &stem) {
    const fs::path p = dir / (stem + ".txt");
    if (!fs::exists(p)) {
      warnings.push_back(p.string() + " missing; treated as no detections");
      return std::vector<Detection>{};
    }
    try {
      return parse_detections(read_text(p), classes);
    } catch (const Error &e) {
      throw Error(e.code(), p.string() + ": " + e.what());
    }
  };

  std::vector<EvalImage> images;
  for (const auto &stem : list_text_stems(in.ground_truth)) {
    EvalImage img;
    img.id = stem;
    img.ground_truth = load_labels(in.ground_truth / (stem + ".txt"), classes);
    img.clean_model_on_clean = load_dets(in.clean_model, stem);
    img.backdoor_on_clean = load_dets(in.backdoor_clean, stem);
    img.backdoor_on_triggered = load_dets(in.backdoor_triggered, stem);
    if (in.triggers) {
      const fs::path side = *in.triggers / (stem + ".json");
      std::vector<int> candidates;
      if (fs::exists(side)) {
        try {
          const json j = json::parse(read_text(side));
          const char *key = j.contains("in_range") ? "in_range" : "stamped_objects";
          candidates = j.at(key).get<std::vector<int>>();
        } catch (const json::exception &e) {
          throw Error(Errc::kConfig, side.string() + ": " + e.what());
        }
      }
      img.attack_candidates = std::move(candidates);
    }
    images.push_back(std::move(img));
  }

  EvalReport report =
      policy.serial() ? kernels::serial::evaluate(images, ecfg) : kernels::omp::evaluate(images, ecfg, policy.threads);
  report.warnings = std::move(warnings);
  return report;
}

namespace {

json optional_number(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

std::string fmt2(const std::optional<double> &v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *v);
  return buf;
}

std::string signed2(const std::optional<double> &v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.2f", *v);
  return buf;
}

}  // namespace

std::string report_json(const EvalReport &report, const EvalConfig &cfg, const ClassMap &classes) {
  json j;
  j["iou_threshold"] = cfg.iou_threshold;
  j["goal"] = to_string(cfg.goal);
  j["source_class"] = classes.name_of(cfg.source_class);
  j["target_class"] = classes.name_of(cfg.target_class);
  j["source_objects"] = report.source_objects;
  j["n_ta"] = report.n_ta;
  j["n_sa"] = report.n_sa;
  j["asr_defined"] = report.asr.has_value();
  j["asr"] = optional_number(report.asr);
  auto per_class = [&](const std::map<int, std::optional<double>> &m) {
    json o = json::object();
    for (const auto &[c, v] : m) o[classes.name_of(c)] = optional_number(v);
    return o;
  };
  j["ap_clean_model"] = per_class(report.ap_clean_model);
  j["ap_backdoor_model"] = per_class(report.ap_backdoor_model);
  j["map_clean_model"] = optional_number(report.map_clean_model);
  j["map_backdoor_model"] = optional_number(report.map_backdoor_model);
  j["baf"] = per_class(report.baf);
  j["baf_map"] = optional_number(report.baf_map);
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

std::string report_table(const EvalReport &report, const EvalConfig &cfg, const ClassMap &classes) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "goal %s, IOU threshold %.2f, %s -> %s\n", std::string(to_string(cfg.goal)).c_str(),
                cfg.iou_threshold, classes.name_of(cfg.source_class).c_str(),
                classes.name_of(cfg.target_class).c_str());
  os << line;
  os << "source objects  " << report.source_objects << "\n";
  os << "N_ta            " << report.n_ta << "\n";
  os << "N_sa            " << report.n_sa << "\n";
  os << "ASR (%)         " << (report.asr ? fmt2(report.asr) : std::string("undefined (N_ta = 0)")) << "\n\n";
  std::snprintf(line, sizeof(line), "%-12s %12s %12s %10s\n", "class", "AP clean", "AP backdoor", "BAF");
  os << line;
  for (const auto &[c, clean] : report.ap_clean_model) {
    const auto it = report.ap_backdoor_model.find(c);
    const auto baf = report.baf.find(c);
    std::snprintf(line, sizeof(line), "%-12s %12s %12s %10s\n", classes.name_of(c).c_str(), fmt2(clean).c_str(),
                  fmt2(it == report.ap_backdoor_model.end() ? std::nullopt : it->second).c_str(),
                  signed2(baf == report.baf.end() ? std::nullopt : baf->second).c_str());
    os << line;
  }
  std::snprintf(line, sizeof(line), "%-12s %12s %12s %10s\n", "mAP", fmt2(report.map_clean_model).c_str(),
                fmt2(report.map_backdoor_model).c_str(), signed2(report.baf_map).c_str());
  os << line;
  return os.str();
}

std::string inspect(const fs::path &image, const std::optional<fs::path> &labels, const ClassMap &classes,
                    double lambda) {
  const GrayImage img = load_pgm(image);
  std::ostringstream os;
  os << image.string() << ": " << img.width() << "x" << img.height() << "\n";

  long hist[8] = {};
  int lo = 255, hi = 0;
  double sum = 0.0;
  for (std::uint8_t p : img.pixels()) {
    lo = std::min<int>(lo, p);
    hi = std::max<int>(hi, p);
    sum += p;
    ++hist[p / 32];
  }
  char line[256];
  std::snprintf(line, sizeof(line), "pixels: min %d max %d mean %.2f\n", lo, hi,
                sum / static_cast<double>(img.pixels().size()));
  os << line << "histogram (32-level bins):";
  for (long h : hist) os << " " << h;
  os << "\n";

  if (!labels) return os.str();
  const auto anns = load_labels(*labels, classes);
  os << anns.size() << " objects\n";
  for (std::size_t i = 0; i < anns.size(); ++i) {
    const PixelBox px = to_pixels(anns[i].bbox, img.width(), img.height());
    std::snprintf(line, sizeof(line), "  [%zu] %-10s box x %.1f..%.1f y %.1f..%.1f", i,
                  classes.name_of(anns[i].class_id).c_str(), px.x0, px.x1, px.y0, px.y1);
    os << line;
    if (anns[i].class_id == classes.source()) {
      const ScaledStamp s = bbox_scaled_stamp(anns[i].bbox, img.width(), img.height(), lambda, 0.0, 0.0, 0);
      std::snprintf(line, sizeof(line), "  stamp %dx%d at (%d,%d)%s", s.stamp.width, s.stamp.height, s.stamp.left,
                    s.stamp.top, s.min_size_applied ? " [min size]" : "");
      os << line;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace thermbd
