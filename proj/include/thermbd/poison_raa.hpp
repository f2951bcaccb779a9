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

#ifndef THERMBD_POISON_RAA_HPP_
#define THERMBD_POISON_RAA_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thermbd/annotations.hpp"
#include "thermbd/poison_plan.hpp"
#include "thermbd/trigger.hpp"

namespace thermbd {

/// Trigger pixel level -> attack radius in pixels.
class RadiusTable {
 public:
  RadiusTable() = default;
  /// Throws kConfig on duplicate levels or non-positive radii.
  explicit RadiusTable(std::vector<std::pair<std::uint8_t, double>> entries);

  std::optional<double> radius_for(std::uint8_t pixel) const noexcept;
  double max_radius() const noexcept;
  const std::vector<std::pair<std::uint8_t, double>> &entries() const noexcept { return entries_; }

 private:
  std::vector<std::pair<std::uint8_t, double>> entries_;
};

struct PixelRatio {
  std::uint8_t pixel = 0;
  double q = 0.0;
};

/// Range-affecting attack: one point trigger per image; source-class objects
/// whose box center lies within the level's radius get their labels edited.
struct RaaConfig {
  AttackGoal goal = AttackGoal::kMisclassify;
  TriggerSpec trigger{.shape = TriggerShape::kStrip};
  RadiusTable radius_table;
  std::vector<PixelRatio> ratios;
  double test_radius = 120.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Euclidean membership, boundary inclusive.
bool in_attack_range(double obj_x, double obj_y, double trigger_x, double trigger_y, double radius) noexcept;

/// Indices of source-class annotations whose pixel box center is within radius.
std::vector<int> objects_in_range(const std::vector<Annotation> &anns, int img_w, int img_h, double trigger_x,
                                  double trigger_y, double radius, int source_class);

/// Disjoint groups: round(q_n * N) images get level p_n, in ratio order.
PoisonPlan select_raa_groups(const std::vector<std::string> &image_ids, const std::vector<PixelRatio> &ratios,
                             std::uint64_t seed);

/// Stamps the trigger at its configured center with the given level and edits
/// source-class objects inside that level's radius.
ImageEdit poison_image_raa(const GrayImage &img, const std::vector<Annotation> &anns, const RaaConfig &cfg,
                           std::uint8_t pixel, const ClassMap &classes);

/// Test-time trigger: same stamp, labels untouched.
ImageEdit trigger_test_image_raa(const GrayImage &img, const std::vector<Annotation> &anns, const RaaConfig &cfg,
                                 std::uint8_t pixel);

Stamp raa_stamp(const RaaConfig &cfg, int img_w, int img_h, std::uint8_t pixel);

struct GridOverlap {
  int index = 0;
  long trigger_cells = 0;
  long object_cells = 0;
  long shared_cells = 0;

  friend bool operator==(const GridOverlap &, const GridOverlap &) = default;
};

/// Splits the image into grid x grid cells and counts, per object, the cells
/// touched (positive-area overlap) by both the trigger stamp and the object box.
std::vector<GridOverlap> grid_overlap_report(const Stamp &trigger, const std::vector<Annotation> &anns, int img_w,
                                             int img_h, int grid);

}  // namespace thermbd

#endif  // THERMBD_POISON_RAA_HPP_
