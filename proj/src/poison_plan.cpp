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

#include "thermbd/poison_plan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "thermbd/error.hpp"

namespace thermbd {

std::string_view to_string(AttackGoal goal) {
  return goal == AttackGoal::kMisclassify ? "misclassify" : "disappear";
}

std::string_view to_string(PoisonRole role) {
  switch (role) {
    case PoisonRole::kClean: return "clean";
    case PoisonRole::kNormal: return "normal";
    case PoisonRole::kAdversarial: return "adversarial";
  }
  return "clean";
}

std::string_view to_string(EditAction action) {
  switch (action) {
    case EditAction::kKept: return "kept";
    case EditAction::kRelabeled: return "relabeled";
    case EditAction::kDeleted: return "deleted";
  }
  return "kept";
}

AttackGoal parse_goal(std::string_view text) {
  if (text == "misclassify") return AttackGoal::kMisclassify;
  if (text == "disappear") return AttackGoal::kDisappear;
  throw Error(Errc::kConfig, "unknown attack goal '" + std::string(text) + "'");
}

std::size_t PoisonPlan::count(PoisonRole role) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [role](const PlanEntry &e) { return e.role == role; }));
}

std::size_t poison_count(double ratio, std::size_t n) {
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 0.5 + 1e-9));
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    // Unbiased draw in [0, i) by rejection; std::uniform_int_distribution is
    // implementation-defined and would break cross-platform reproducibility.
    const std::uint64_t range = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t draw = rng();
    while (draw >= limit) draw = rng();
    std::swap(perm[i - 1], perm[draw % range]);
  }
  return perm;
}

}  // namespace thermbd
