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

#ifndef THERMBD_ANNOTATIONS_HPP_
#define THERMBD_ANNOTATIONS_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace thermbd {

/// Normalized center/size box. Coordinates are fractions of the image size.
struct BBox {
  double cx = 0.5;
  double cy = 0.5;
  double w = 0.0;
  double h = 0.0;

  double left() const noexcept { return cx - w / 2.0; }
  double right() const noexcept { return cx + w / 2.0; }
  double top() const noexcept { return cy - h / 2.0; }
  double bottom() const noexcept { return cy + h / 2.0; }

  friend bool operator==(const BBox &, const BBox &) = default;
};

/// True when 0 <= cx,cy <= 1 and 0 < w,h <= 1.
bool is_valid(const BBox &box) noexcept;

/// Clips the box extent to the unit square, keeping it in center/size form.
BBox clamp_to_unit(const BBox &box) noexcept;

/// Axis-aligned rectangle in (continuous) pixel coordinates: [x0, x1) x [y0, y1).
struct PixelBox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  double width() const noexcept { return x1 - x0; }
  double height() const noexcept { return y1 - y0; }
  double center_x() const noexcept { return (x0 + x1) / 2.0; }
  double center_y() const noexcept { return (y0 + y1) / 2.0; }
};

PixelBox to_pixels(const BBox &box, int img_w, int img_h) noexcept;

struct Annotation {
  int class_id = 0;
  BBox bbox;

  friend bool operator==(const Annotation &, const Annotation &) = default;
};

struct Detection {
  int class_id = 0;
  BBox bbox;
  double confidence = 0.0;

  friend bool operator==(const Detection &, const Detection &) = default;
};

/// Ordered class names plus the attack's source and target classes.
class ClassMap {
 public:
  ClassMap() = default;
  /// Throws kConfig when a name is missing or source == target.
  ClassMap(std::vector<std::string> names, std::string_view source, std::string_view target);

  const std::vector<std::string> &names() const noexcept { return names_; }
  int size() const noexcept { return static_cast<int>(names_.size()); }
  bool contains(int class_id) const noexcept { return class_id >= 0 && class_id < size(); }
  /// -1 when absent.
  int id_of(std::string_view name) const noexcept;
  const std::string &name_of(int class_id) const { return names_.at(static_cast<std::size_t>(class_id)); }

  int source() const noexcept { return source_; }
  int target() const noexcept { return target_; }

 private:
  std::vector<std::string> names_;
  int source_ = -1;
  int target_ = -1;
};

/// One "class_id cx cy w h" per nonempty line. Errors carry the 1-based line number.
std::vector<Annotation> parse_labels(std::string_view text, const ClassMap &classes);
/// Fixed 6-decimal emission; empty list yields "".
std::string emit_labels(const std::vector<Annotation> &anns);

/// One "class_id cx cy w h confidence" per nonempty line.
std::vector<Detection> parse_detections(std::string_view text, const ClassMap &classes);
std::string emit_detections(const std::vector<Detection> &dets);

/// Intersection over union, in [0, 1].
double iou(const BBox &a, const BBox &b) noexcept;

}  // namespace thermbd

#endif  // THERMBD_ANNOTATIONS_HPP_
