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

#include "thermbd/trigger.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thermbd/error.hpp"

namespace thermbd {

namespace {

// Rounds half up; placement coordinates may be negative before clipping.
int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

Stamp centered_clipped(double cx, double cy, int width, int height, int img_w, int img_h, std::uint8_t value) {
  const int left = round_half_up(cx - width / 2.0);
  const int top = round_half_up(cy - height / 2.0);
  const int l = std::max(left, 0);
  const int t = std::max(top, 0);
  const int r = std::min(left + width, img_w);
  const int b = std::min(top + height, img_h);
  return Stamp{l, t, r - l, b - t, value};
}

}  // namespace

std::uint8_t resolve_intensity(const Intensity &intensity, const ThermalMap *map) {
  if (const auto *p = std::get_if<PixelValue>(&intensity)) {
    if (p->value < 0 || p->value > 255) {
      throw Error(Errc::kOutOfRange, "trigger pixel value " + std::to_string(p->value) + " outside [0,255]");
    }
    return static_cast<std::uint8_t>(p->value);
  }
  const double celsius = std::get<Celsius>(intensity).value;
  if (map == nullptr) throw Error(Errc::kMissingThermalMap, "temperature trigger requires a thermal map");
  const PixelLevel level = temp_to_pixel(*map, celsius);
  if (level.clamped) {
    const bool below = map->response(celsius) < 0.0;
    throw Error(below ? Errc::kBelowCalibrationRange : Errc::kOutsideCalibrationRange,
                "trigger temperature " + std::to_string(celsius) + " C is outside the calibration range");
  }
  return level.value;
}

ScaledStamp bbox_scaled_stamp(const BBox &box, int img_w, int img_h, double lambda, double offset_x,
                              double offset_y, std::uint8_t value) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw Error(Errc::kOutOfRange, "lambda must be in (0, 1]");
  const PixelBox px = to_pixels(box, img_w, img_h);
  const double area = px.width() * px.height();
  if (std::round(area) <= 0.0) throw Error(Errc::kDegenerateBox, "box rounds to zero pixel area");

  ScaledStamp out;
  int side = static_cast<int>(std::round(std::sqrt(lambda * area)));
  if (side < 1) {
    side = 1;
    out.min_size_applied = true;
  }
  // Keep the placement point inside the image so the clipped stamp is never empty.
  const double cx = std::clamp(px.center_x() + offset_x * px.width(), 0.5, img_w - 0.5);
  const double cy = std::clamp(px.center_y() + offset_y * px.height(), 0.5, img_h - 0.5);
  out.stamp = centered_clipped(cx, cy, side, side, img_w, img_h, value);
  return out;
}

Stamp point_stamp(double center_x, double center_y, int width, int height, int img_w, int img_h,
                  std::uint8_t value) {
  if (width < 1 || height < 1) throw Error(Errc::kOutOfRange, "trigger width and height must be >= 1");
  if (!(center_x >= 0.0 && center_x < img_w && center_y >= 0.0 && center_y < img_h)) {
    throw Error(Errc::kTriggerOutsideImage, "trigger center outside the image");
  }
  return centered_clipped(center_x, center_y, width, height, img_w, img_h, value);
}

GrayImage apply_stamps(const GrayImage &img, const std::vector<Stamp> &stamps) {
  GrayImage out = img;
  for (const Stamp &s : stamps) {
    const int l = std::max(s.left, 0);
    const int t = std::max(s.top, 0);
    const int r = std::min(s.right(), out.width());
    const int b = std::min(s.bottom(), out.height());
    for (int y = t; y < b; ++y) {
      auto row = out.row(y);
      std::fill(row.begin() + l, row.begin() + std::max(l, r), s.value);
    }
  }
  return out;
}

}  // namespace thermbd
