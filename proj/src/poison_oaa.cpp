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

#include "thermbd/poison_oaa.hpp"

#include <string>

#include "thermbd/error.hpp"

namespace thermbd {

void OaaConfig::validate() const {
  if (!(q > 0.0 && q <= 1.0)) throw Error(Errc::kConfig, "oaa: q must be in (0, 1]");
  if (!(adversarial_ratio >= 0.0 && adversarial_ratio < 1.0)) {
    throw Error(Errc::kConfig, "oaa: adversarial_ratio must be in [0, 1)");
  }
  if (q + adversarial_ratio > 1.0 + 1e-12) throw Error(Errc::kConfig, "oaa: q + adversarial_ratio exceeds 1");
  if (range_lo < 0 || range_hi > 255 || range_lo > range_hi) {
    throw Error(Errc::kConfig, "oaa: active pixel range must satisfy 0 <= p1 <= p2 <= 255");
  }
  if (trigger.shape != TriggerShape::kBboxBlock) throw Error(Errc::kConfig, "oaa: trigger shape must be bbox_block");
  if (!(trigger.lambda > 0.0 && trigger.lambda <= 1.0)) throw Error(Errc::kConfig, "oaa: lambda must be in (0, 1]");
  if (adversarial_ratio > 0.0 && !adversarial_trigger) {
    throw Error(Errc::kConfig, "oaa: adversarial_ratio > 0 requires adversarial_trigger");
  }
}

PoisonPlan select_poison_subset(const std::vector<std::string> &image_ids, double q, double adversarial_ratio,
                                std::uint64_t seed) {
  if (image_ids.empty()) throw Error(Errc::kConfig, "poison selection needs at least one image");
  const std::size_t n = image_ids.size();
  const std::size_t n_normal = poison_count(q, n);
  const std::size_t n_adv = poison_count(adversarial_ratio, n);
  if (q < 0.0 || adversarial_ratio < 0.0 || n_normal + n_adv > n) {
    throw Error(Errc::kCountExceedsPopulation, "poison counts " + std::to_string(n_normal) + " + " +
                                                   std::to_string(n_adv) + " exceed " + std::to_string(n) +
                                                   " images");
  }

  PoisonPlan plan;
  plan.mode = "oaa";
  plan.seed = seed;
  plan.entries.resize(n);
  for (std::size_t i = 0; i < n; ++i) plan.entries[i].image_id = image_ids[i];

  const auto perm = seeded_permutation(n, seed);
  for (std::size_t k = 0; k < n_normal + n_adv; ++k) {
    plan.entries[perm[k]].role = k < n_normal ? PoisonRole::kNormal : PoisonRole::kAdversarial;
  }
  return plan;
}

namespace {

bool in_range(std::uint8_t p, const OaaConfig &cfg) { return p >= cfg.range_lo && p <= cfg.range_hi; }

// One box-scaled stamp per source-class object, in annotation order.
void stamp_sources(ImageEdit &out, const GrayImage &img, const std::vector<Annotation> &anns,
                   const TriggerSpec &trigger, int source, std::uint8_t value) {
  for (const auto &a : anns) {
    if (a.class_id != source) continue;
    const ScaledStamp s =
        bbox_scaled_stamp(a.bbox, img.width(), img.height(), trigger.lambda, trigger.offset_x, trigger.offset_y, value);
    out.stamps.push_back(s.stamp);
    if (s.min_size_applied) ++out.min_size_stamps;
  }
  out.image = apply_stamps(img, out.stamps);
}

}  // namespace

ImageEdit poison_image_oaa(const GrayImage &img, const std::vector<Annotation> &anns, const OaaConfig &cfg,
                           PoisonRole role, const ClassMap &classes, const ThermalMap *map) {
  ImageEdit out;
  if (role == PoisonRole::kClean) {
    out.image = img;
    out.annotations = anns;
    return out;
  }

  std::uint8_t value = 0;
  if (role == PoisonRole::kNormal) {
    value = resolve_intensity(cfg.trigger, map);
    if (!in_range(value, cfg)) {
      throw Error(Errc::kConfigContradiction, "oaa: normal trigger level " + std::to_string(value) +
                                                  " lies outside the active range [" + std::to_string(cfg.range_lo) +
                                                  "," + std::to_string(cfg.range_hi) + "]");
    }
  } else {
    if (!cfg.adversarial_trigger) throw Error(Errc::kConfig, "oaa: adversarial role without adversarial_trigger");
    value = resolve_intensity(*cfg.adversarial_trigger, map);
    if (in_range(value, cfg)) {
      throw Error(Errc::kConfigContradiction, "oaa: adversarial trigger level " + std::to_string(value) +
                                                  " lies inside the active range");
    }
  }

  const int source = classes.source();
  const TriggerSpec &trigger = role == PoisonRole::kNormal ? cfg.trigger : *cfg.adversarial_trigger;
  stamp_sources(out, img, anns, trigger, source, value);

  for (std::size_t i = 0; i < anns.size(); ++i) {
    const Annotation &a = anns[i];
    ObjectEdit edit{static_cast<int>(i), a.class_id, a.class_id, EditAction::kKept};
    if (a.class_id == source && role == PoisonRole::kNormal) {
      if (cfg.goal == AttackGoal::kMisclassify) {
        edit.action = EditAction::kRelabeled;
        edit.to_class = classes.target();
        out.annotations.push_back(Annotation{classes.target(), clamp_to_unit(a.bbox)});
      } else {
        edit.action = EditAction::kDeleted;
        edit.to_class = -1;
      }
    } else {
      out.annotations.push_back(a);
    }
    out.edits.push_back(edit);
  }
  return out;
}

ImageEdit trigger_test_image_oaa(const GrayImage &img, const std::vector<Annotation> &anns, const OaaConfig &cfg,
                                 const ClassMap &classes, const ThermalMap *map,
                                 std::optional<std::uint8_t> intensity_override) {
  ImageEdit out;
  const std::uint8_t value = intensity_override ? *intensity_override : resolve_intensity(cfg.trigger, map);
  stamp_sources(out, img, anns, cfg.trigger, classes.source(), value);
  out.annotations = anns;
  for (std::size_t i = 0; i < anns.size(); ++i) {
    out.edits.push_back(ObjectEdit{static_cast<int>(i), anns[i].class_id, anns[i].class_id, EditAction::kKept});
  }
  return out;
}

}  // namespace thermbd
