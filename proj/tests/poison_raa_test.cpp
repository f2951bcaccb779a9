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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "support.hpp"
#include "thermbd/error.hpp"
#include "thermbd/poison_raa.hpp"

namespace thermbd {
namespace {

using testing::kBicycle;
using testing::kCar;
using testing::kPerson;

RaaConfig default_raa() {
  RaaConfig cfg;
  cfg.radius_table = RadiusTable({{0, 80.0}, {128, 120.0}, {255, 160.0}});
  cfg.ratios = {{0, 0.10}, {128, 0.06}, {255, 0.04}};
  return cfg;
}

// Object centered at pixel (x, y) in a w x h image.
Annotation at_pixel(int cls, double x, double y, int w, int h) { return {cls, {x / w, y / h, 10.0 / w, 10.0 / h}}; }

TEST(InAttackRange, Examples) {
  EXPECT_TRUE(in_attack_range(5, 5, 5, 5, 0.1));
  EXPECT_TRUE(in_attack_range(160, 356, 160, 206, 150));
  EXPECT_FALSE(in_attack_range(160, 356, 160, 206, 149));
  EXPECT_TRUE(in_attack_range(160 + 90, 206 + 120, 160, 206, 150));
  EXPECT_FALSE(in_attack_range(160 + 90, 206 + 120.001, 160, 206, 150));
}

TEST(RadiusTable, LookupAndErrors) {
  const RadiusTable t({{0, 80.0}, {255, 160.0}});
  EXPECT_EQ(t.radius_for(255), 160.0);
  EXPECT_FALSE(t.radius_for(7));
  EXPECT_EQ(t.max_radius(), 160.0);
  EXPECT_THROW(RadiusTable({{0, 80.0}, {0, 90.0}}), Error);
  EXPECT_THROW(RadiusTable({{0, 0.0}}), Error);
}

TEST(RaaConfig, Validate) {
  RaaConfig cfg = default_raa();
  EXPECT_NO_THROW(cfg.validate());
  cfg.ratios.push_back({64, 0.01});
  EXPECT_THROW(cfg.validate(), Error);
  cfg = default_raa();
  cfg.test_radius = 200;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = default_raa();
  cfg.trigger.shape = TriggerShape::kBboxBlock;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(PoisonImageRaa, NothingInRange) {
  const RaaConfig cfg = default_raa();
  const std::vector<Annotation> anns{at_pixel(kCar, 600, 30, 640, 512)};
  const ImageEdit out = poison_image_raa(GrayImage(640, 512, 0), anns, cfg, 0, testing::fixture_classes());
  EXPECT_EQ(out.annotations, anns);
  ASSERT_EQ(out.stamps.size(), 1u);
  EXPECT_EQ(out.stamps[0], (Stamp{154, 146, 12, 120, 0}));
}

TEST(PoisonImageRaa, DisappearInsideOnly) {
  RaaConfig cfg = default_raa();
  cfg.goal = AttackGoal::kDisappear;
  const int w = 640, h = 512;
  const std::vector<Annotation> anns{at_pixel(kCar, 170, 210, w, h), at_pixel(kPerson, 165, 200, w, h),
                                     at_pixel(kCar, 200, 250, w, h), at_pixel(kCar, 500, 450, w, h)};
  const ImageEdit out = poison_image_raa(GrayImage(w, h, 0), anns, cfg, 128, testing::fixture_classes());
  const std::vector<Annotation> expected{anns[1], anns[3]};
  EXPECT_EQ(out.annotations, expected);
  EXPECT_EQ(out.stamps.size(), 1u);
}

TEST(PoisonImageRaa, MisclassifyAndNesting) {
  const RaaConfig cfg = default_raa();
  const int w = 640, h = 512;
  const std::vector<Annotation> anns{at_pixel(kCar, 160, 206 + 60, w, h), at_pixel(kCar, 160, 206 + 100, w, h),
                                     at_pixel(kCar, 160, 206 + 140, w, h), at_pixel(kBicycle, 160, 210, w, h)};
  auto edited = [&](std::uint8_t p) {
    std::set<int> s;
    for (const auto &e : poison_image_raa(GrayImage(w, h, 0), anns, cfg, p, testing::fixture_classes()).edits) {
      if (e.action != EditAction::kKept) s.insert(e.index);
    }
    return s;
  };
  const auto s0 = edited(0), s128 = edited(128), s255 = edited(255);
  EXPECT_EQ(s0, (std::set<int>{0}));
  EXPECT_EQ(s128, (std::set<int>{0, 1}));
  EXPECT_EQ(s255, (std::set<int>{0, 1, 2}));
  EXPECT_TRUE(std::includes(s255.begin(), s255.end(), s0.begin(), s0.end()));
  EXPECT_THROW(poison_image_raa(GrayImage(w, h, 0), anns, cfg, 7, testing::fixture_classes()), Error);
}

TEST(ObjectsInRange, NestingProperty) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto anns = testing::random_annotations(rng, 8, 3);
    const double r1 = testing::uniform(rng, 1, 200), r2 = r1 + testing::uniform(rng, 0, 100);
    const auto a = objects_in_range(anns, 640, 512, 160, 206, r1, kCar);
    const auto b = objects_in_range(anns, 640, 512, 160, 206, r2, kCar);
    EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
}

TEST(SelectRaaGroups, ExactDisjointCounts) {
  std::vector<std::string> ids;
  for (int i = 0; i < 250; ++i) ids.push_back(std::to_string(i));
  const PoisonPlan plan = select_raa_groups(ids, default_raa().ratios, 3);
  std::map<int, int> per_level;
  for (const auto &e : plan.entries) {
    if (e.role == PoisonRole::kNormal) ++per_level[e.pixel_level];
    else EXPECT_EQ(e.pixel_level, -1);
  }
  EXPECT_EQ(per_level[0], 25);
  EXPECT_EQ(per_level[128], 15);
  EXPECT_EQ(per_level[255], 10);
  const PoisonPlan again = select_raa_groups(ids, default_raa().ratios, 3);
  for (std::size_t i = 0; i < ids.size(); ++i) EXPECT_EQ(plan.entries[i].pixel_level, again.entries[i].pixel_level);
}

TEST(TriggerTestImageRaa, SingleStampLabelsKept) {
  const auto anns = std::vector<Annotation>{at_pixel(kCar, 170, 210, 320, 256)};
  const ImageEdit out = trigger_test_image_raa(GrayImage(320, 256, 9), anns, default_raa(), 255);
  EXPECT_EQ(out.annotations, anns);
  ASSERT_EQ(out.stamps.size(), 1u);
  EXPECT_EQ(out.stamps[0], (Stamp{154, 146, 12, 110, 255}));
}

TEST(GridOverlap, DisjointQuadrants) {
  const Stamp trig{0, 0, 20, 20, 1};
  const std::vector<Annotation> anns{{kCar, {0.75, 0.75, 0.2, 0.2}}};
  const auto rep = grid_overlap_report(trig, anns, 100, 100, 16);
  ASSERT_EQ(rep.size(), 1u);
  EXPECT_EQ(rep[0].shared_cells, 0);
  EXPECT_GT(rep[0].trigger_cells, 0);
}

TEST(GridOverlap, TriggerInsideObject) {
  const Stamp trig{40, 40, 10, 10, 1};
  const std::vector<Annotation> anns{{kCar, {0.5, 0.5, 0.6, 0.6}}};
  const auto rep = grid_overlap_report(trig, anns, 100, 100, 10);
  ASSERT_EQ(rep.size(), 1u);
  EXPECT_EQ(rep[0].trigger_cells, 1);
  EXPECT_EQ(rep[0].shared_cells, rep[0].trigger_cells);
  EXPECT_EQ(rep[0].object_cells, 36);
}

TEST(GridOverlap, StraddlingBoundary) {
  // 2x2 grid on 100x100: the boundary sits at 50.
  const Stamp trig{45, 45, 10, 10, 1};
  const std::vector<Annotation> anns{{kCar, {0.5, 0.5, 0.2, 0.2}}, {kCar, {0.25, 0.5, 0.1, 0.1}}};
  const auto rep = grid_overlap_report(trig, anns, 100, 100, 2);
  EXPECT_EQ(rep[0], (GridOverlap{0, 4, 4, 4}));
  EXPECT_EQ(rep[1], (GridOverlap{1, 4, 2, 2}));
  // Touching the boundary without crossing it does not count.
  const auto edge = grid_overlap_report(Stamp{40, 40, 10, 10, 1}, {}, 100, 100, 2);
  EXPECT_TRUE(edge.empty());
  const auto left = grid_overlap_report(Stamp{40, 40, 10, 10, 1}, {anns[0]}, 100, 100, 2);
  EXPECT_EQ(left[0].trigger_cells, 1);
  EXPECT_EQ(left[0].shared_cells, 1);
}

}  // namespace
}  // namespace thermbd
