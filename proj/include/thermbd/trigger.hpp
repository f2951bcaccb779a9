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

#ifndef THERMBD_TRIGGER_HPP_
#define THERMBD_TRIGGER_HPP_

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "thermbd/annotations.hpp"
#include "thermbd/raster_io.hpp"
#include "thermbd/thermal_map.hpp"

namespace thermbd {

struct PixelValue {
  int value = 0;
};

struct Celsius {
  double value = 0.0;
};

using Intensity = std::variant<PixelValue, Celsius>;

enum class TriggerShape {
  kBboxBlock,  // square block scaled to each object's box (OAA)
  kStrip,      // h x w strip centered on a point (RAA, pole-like)
  kBlock,      // h x w block centered on a point (RAA, sign-like)
};

struct TriggerSpec {
  TriggerShape shape = TriggerShape::kBboxBlock;
  Intensity intensity = PixelValue{192};
  /// Stamp area as a fraction of the object's box area (kBboxBlock).
  double lambda = 0.04;
  /// Placement inside the object box, in units of the box size; (0, 0) is the center.
  double offset_x = 0.0;
  double offset_y = 0.0;
  /// Pixel size for kStrip / kBlock.
  int width = 12;
  int height = 120;
  /// Absolute center in pixels for kStrip / kBlock.
  double center_x = 160.0;
  double center_y = 206.0;
};

/// Uniform-valued pixel rectangle, already clipped to its image.
struct Stamp {
  int left = 0;
  int top = 0;
  int width = 0;
  int height = 0;
  std::uint8_t value = 0;

  int right() const noexcept { return left + width; }
  int bottom() const noexcept { return top + height; }
  long area() const noexcept { return static_cast<long>(width) * height; }

  friend bool operator==(const Stamp &, const Stamp &) = default;
};

/// Pixel level of a trigger. Temperatures go through the map and must land
/// inside [0, 255] without clamping.
std::uint8_t resolve_intensity(const Intensity &intensity, const ThermalMap *map);
inline std::uint8_t resolve_intensity(const TriggerSpec &spec, const ThermalMap *map) {
  return resolve_intensity(spec.intensity, map);
}

struct ScaledStamp {
  Stamp stamp;
  /// The side rounded to zero and was raised to one pixel.
  bool min_size_applied = false;
};

/// Square stamp of side round(sqrt(lambda * box pixel area)), centered on the
/// offset point of the box and clipped to the image.
ScaledStamp bbox_scaled_stamp(const BBox &box, int img_w, int img_h, double lambda, double offset_x,
                              double offset_y, std::uint8_t value);

/// width x height rectangle centered on (center_x, center_y), clipped.
/// Throws kTriggerOutsideImage when the center is not inside the image.
Stamp point_stamp(double center_x, double center_y, int width, int height, int img_w, int img_h,
                  std::uint8_t value);

/// Copy of img with every stamp painted in order (later stamps win).
GrayImage apply_stamps(const GrayImage &img, const std::vector<Stamp> &stamps);

}  // namespace thermbd

#endif  // THERMBD_TRIGGER_HPP_
