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

#ifndef THERMBD_POISON_OAA_HPP_
#define THERMBD_POISON_OAA_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thermbd/annotations.hpp"
#include "thermbd/poison_plan.hpp"
#include "thermbd/thermal_map.hpp"
#include "thermbd/trigger.hpp"

namespace thermbd {

/// Object-affecting attack: a box-scaled trigger on every source-class object.
struct OaaConfig {
  AttackGoal goal = AttackGoal::kMisclassify;
  double q = 0.20;
  TriggerSpec trigger;
  /// Label edits happen only for trigger levels inside [range_lo, range_hi].
  int range_lo = 0;
  int range_hi = 255;
  double adversarial_ratio = 0.0;
  /// Out-of-range trigger used for label-preserving (adversarial) images.
  std::optional<TriggerSpec> adversarial_trigger;
  std::uint64_t seed = 0;

  /// Throws kConfig on invariant violations.
  void validate() const;
};

/// Splits ids into disjoint normal and adversarial subsets of exactly
/// round(q*N) and round(adversarial_ratio*N) images. Deterministic in (ids, seed).
PoisonPlan select_poison_subset(const std::vector<std::string> &image_ids, double q, double adversarial_ratio,
                                std::uint64_t seed);

/// Stamps every source-class object and, for the normal role, relabels or
/// deletes it according to the goal. Adversarial and clean roles never touch labels.
ImageEdit poison_image_oaa(const GrayImage &img, const std::vector<Annotation> &anns, const OaaConfig &cfg,
                           PoisonRole role, const ClassMap &classes, const ThermalMap *map);

/// Stamps every source-class object with the configured (or overridden) level;
/// labels stay truthful.
ImageEdit trigger_test_image_oaa(const GrayImage &img, const std::vector<Annotation> &anns, const OaaConfig &cfg,
                                 const ClassMap &classes, const ThermalMap *map,
                                 std::optional<std::uint8_t> intensity_override = std::nullopt);

}  // namespace thermbd

#endif  // THERMBD_POISON_OAA_HPP_
