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

#ifndef THERMBD_POISON_PLAN_HPP_
#define THERMBD_POISON_PLAN_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "thermbd/annotations.hpp"
#include "thermbd/raster_io.hpp"
#include "thermbd/trigger.hpp"

namespace thermbd {

enum class AttackGoal { kMisclassify, kDisappear };
enum class PoisonRole { kClean, kNormal, kAdversarial };
enum class EditAction { kKept, kRelabeled, kDeleted };

std::string_view to_string(AttackGoal goal);
std::string_view to_string(PoisonRole role);
std::string_view to_string(EditAction action);
AttackGoal parse_goal(std::string_view text);

struct ObjectEdit {
  int index = 0;  // position in the original annotation list
  int from_class = 0;
  int to_class = 0;  // -1 when deleted
  EditAction action = EditAction::kKept;

  friend bool operator==(const ObjectEdit &, const ObjectEdit &) = default;
};

/// Result of poisoning or triggering one image.
struct ImageEdit {
  GrayImage image;
  std::vector<Annotation> annotations;
  std::vector<Stamp> stamps;
  std::vector<ObjectEdit> edits;
  /// Objects whose stamp was raised to the 1x1 minimum.
  int min_size_stamps = 0;
};

struct PlanEntry {
  std::string image_id;
  PoisonRole role = PoisonRole::kClean;
  /// RAA trigger pixel level, -1 for OAA.
  int pixel_level = -1;
  std::vector<Stamp> stamps;
  std::vector<ObjectEdit> edits;
  int min_size_stamps = 0;
};

/// Audit trail of a poisoning run; entries follow the input image order.
struct PoisonPlan {
  std::string mode;
  std::uint64_t seed = 0;
  std::vector<PlanEntry> entries;

  std::size_t count(PoisonRole role) const;
};

/// round-half-up(ratio * n).
std::size_t poison_count(double ratio, std::size_t n);

/// Fisher-Yates permutation of [0, n) driven by mt19937_64; identical on every
/// platform for a given seed.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

}  // namespace thermbd

#endif  // THERMBD_POISON_PLAN_HPP_
