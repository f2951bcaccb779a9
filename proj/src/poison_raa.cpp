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

#include "thermbd/poison_raa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thermbd/error.hpp"

namespace thermbd {

RadiusTable::RadiusTable(std::vector<std::pair<std::uint8_t, double>> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!(entries_[i].second > 0.0)) throw Error(Errc::kConfig, "radius table: radii must be positive");
    for (std::size_t j = 0; j < i; ++j) {
      if (entries_[i].first == entries_[j].first) {
        throw Error(Errc::kConfig, "radius table: duplicate pixel level " + std::to_string(entries_[i].first));
      }
    }
  }
}

std::optional<double> RadiusTable::radius_for(std::uint8_t pixel) const noexcept {
  for (const auto &[p, r] : entries_) {
    if (p == pixel) return r;
  }
  return std::nullopt;
}

double RadiusTable::max_radius() const noexcept {
  double m = 0.0;
  for (const auto &e : entries_) m = std::max(m, e.second);
  return m;
}

void RaaConfig::validate() const {
  if (trigger.shape == TriggerShape::kBboxBlock) throw Error(Errc::kConfig, "raa: trigger shape must be strip or block");
  if (trigger.width < 1 || trigger.height < 1) throw Error(Errc::kConfig, "raa: trigger width/height must be >= 1");
  if (radius_table.entries().empty()) throw Error(Errc::kConfig, "raa: radius table is empty");
  double total = 0.0;
  for (const auto &r : ratios) {
    if (!(r.q >= 0.0)) throw Error(Errc::kConfig, "raa: ratios must be nonnegative");
    if (!radius_table.radius_for(r.pixel)) {
      throw Error(Errc::kConfig, "raa: ratio level " + std::to_string(r.pixel) + " missing from radius table");
    }
    total += r.q;
  }
  if (total > 1.0 + 1e-12) throw Error(Errc::kConfig, "raa: per-level ratios sum above 1");
  if (!(test_radius > 0.0) || test_radius > radius_table.max_radius()) {
    throw Error(Errc::kConfig, "raa: test_radius must be positive and not exceed the largest training radius");
  }
}

bool in_attack_range(double obj_x, double obj_y, double trigger_x, double trigger_y, double radius) noexcept {
  const double dx = obj_x - trigger_x;
  const double dy = obj_y - trigger_y;
  return dx * dx + dy * dy <= radius * radius;
}

std::vector<int> objects_in_range(const std::vector<Annotation> &anns, int img_w, int img_h, double trigger_x,
                                  double trigger_y, double radius, int source_class) {
  std::vector<int> out;
  for (std::size_t i = 0; i < anns.size(); ++i) {
    if (anns[i].class_id != source_class) continue;
    const double ox = anns[i].bbox.cx * img_w;
    const double oy = anns[i].bbox.cy * img_h;
    if (in_attack_range(ox, oy, trigger_x, trigger_y, radius)) out.push_back(static_cast<int>(i));
  }
  return out;
}

PoisonPlan select_raa_groups(const std::vector<std::string> &image_ids, const std::vector<PixelRatio> &ratios,
                             std::uint64_t seed) {
  if (image_ids.empty()) throw Error(Errc::kConfig, "poison selection needs at least one image");
  const std::size_t n = image_ids.size();
  std::vector<std::size_t> counts;
  std::size_t total = 0;
  for (const auto &r : ratios) {
    counts.push_back(poison_count(r.q, n));
    total += counts.back();
  }
  if (total > n) {
    throw Error(Errc::kCountExceedsPopulation,
                "raa: poison counts sum to " + std::to_string(total) + " > " + std::to_string(n) + " images");
  }

  PoisonPlan plan;
  plan.mode = "raa";
  plan.seed = seed;
  plan.entries.resize(n);
  for (std::size_t i = 0; i < n; ++i) plan.entries[i].image_id = image_ids[i];

  const auto perm = seeded_permutation(n, seed);
  std::size_t k = 0;
  for (std::size_t g = 0; g < ratios.size(); ++g) {
    for (std::size_t c = 0; c < counts[g]; ++c, ++k) {
      plan.entries[perm[k]].role = PoisonRole::kNormal;
      plan.entries[perm[k]].pixel_level = ratios[g].pixel;
    }
  }
  return plan;
}

Stamp raa_stamp(const RaaConfig &cfg, int img_w, int img_h, std::uint8_t pixel) {
  return point_stamp(cfg.trigger.center_x, cfg.trigger.center_y, cfg.trigger.width, cfg.trigger.height, img_w, img_h,
                     pixel);
}

ImageEdit poison_image_raa(const GrayImage &img, const std::vector<Annotation> &anns, const RaaConfig &cfg,
                           std::uint8_t pixel, const ClassMap &classes) {
  const auto radius = cfg.radius_table.radius_for(pixel);
  if (!radius) throw Error(Errc::kConfig, "raa: pixel level " + std::to_string(pixel) + " not in radius table");

  ImageEdit out;
  out.stamps.push_back(raa_stamp(cfg, img.width(), img.height(), pixel));
  out.image = apply_stamps(img, out.stamps);

  const auto hits = objects_in_range(anns, img.width(), img.height(), cfg.trigger.center_x, cfg.trigger.center_y,
                                     *radius, classes.source());
  std::vector<bool> hit(anns.size(), false);
  for (int i : hits) hit[static_cast<std::size_t>(i)] = true;

  for (std::size_t i = 0; i < anns.size(); ++i) {
    const Annotation &a = anns[i];
    ObjectEdit edit{static_cast<int>(i), a.class_id, a.class_id, EditAction::kKept};
    if (hit[i] && cfg.goal == AttackGoal::kMisclassify) {
      edit.action = EditAction::kRelabeled;
      edit.to_class = classes.target();
      out.annotations.push_back(Annotation{classes.target(), clamp_to_unit(a.bbox)});
    } else if (hit[i]) {
      edit.action = EditAction::kDeleted;
      edit.to_class = -1;
    } else {
      out.annotations.push_back(a);
    }
    out.edits.push_back(edit);
  }
  return out;
}

ImageEdit trigger_test_image_raa(const GrayImage &img, const std::vector<Annotation> &anns, const RaaConfig &cfg,
                                 std::uint8_t pixel) {
  ImageEdit out;
  out.stamps.push_back(raa_stamp(cfg, img.width(), img.height(), pixel));
  out.image = apply_stamps(img, out.stamps);
  out.annotations = anns;
  for (std::size_t i = 0; i < anns.size(); ++i) {
    out.edits.push_back(ObjectEdit{static_cast<int>(i), anns[i].class_id, anns[i].class_id, EditAction::kKept});
  }
  return out;
}

namespace {

struct CellSpan {
  long first = 0;
  long last = -1;  // inclusive; empty when last < first
  long count() const { return std::max(0L, last - first + 1); }
};

// Cell i covers [i*extent/grid, (i+1)*extent/grid]. It is touched by the open
// interval (lo, hi) when i*extent < hi*grid and (i+1)*extent > lo*grid. The
// products are formed in long double, exact for grids up to 2^11 cells.
CellSpan touched_cells(double lo, double hi, int extent, int grid) {
  CellSpan span;
  if (!(hi > lo)) return span;
  const long double lo_g = static_cast<long double>(lo) * grid;
  const long double hi_g = static_cast<long double>(hi) * grid;
  long first = static_cast<long>(std::floor(lo_g / extent));
  long last = static_cast<long>(std::ceil(hi_g / extent)) - 1;
  first = std::max(first - 1, 0L);
  last = std::min(last + 1, static_cast<long>(grid) - 1);
  // Snap to the exact predicate; the division above may be off by one.
  while (first <= last && !(static_cast<long double>(first + 1) * extent > lo_g)) ++first;
  while (last >= first && !(static_cast<long double>(last) * extent < hi_g)) --last;
  span.first = first;
  span.last = last;
  return span;
}

long overlap_count(const CellSpan &a, const CellSpan &b) {
  const long first = std::max(a.first, b.first);
  const long last = std::min(a.last, b.last);
  return std::max(0L, last - first + 1);
}

}  // namespace

std::vector<GridOverlap> grid_overlap_report(const Stamp &trigger, const std::vector<Annotation> &anns, int img_w,
                                             int img_h, int grid) {
  if (grid < 1) throw Error(Errc::kConfig, "grid must be >= 1");
  const CellSpan tx = touched_cells(trigger.left, trigger.right(), img_w, grid);
  const CellSpan ty = touched_cells(trigger.top, trigger.bottom(), img_h, grid);

  std::vector<GridOverlap> out;
  out.reserve(anns.size());
  for (std::size_t i = 0; i < anns.size(); ++i) {
    const PixelBox px = to_pixels(anns[i].bbox, img_w, img_h);
    const CellSpan ox = touched_cells(px.x0, px.x1, img_w, grid);
    const CellSpan oy = touched_cells(px.y0, px.y1, img_h, grid);
    out.push_back(GridOverlap{static_cast<int>(i), tx.count() * ty.count(), ox.count() * oy.count(),
                              overlap_count(tx, ox) * overlap_count(ty, oy)});
  }
  return out;
}

}  // namespace thermbd
