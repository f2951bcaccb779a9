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

#include "thermbd/annotations.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "thermbd/error.hpp"

namespace thermbd {

bool is_valid(const BBox &box) noexcept {
  auto unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  return unit(box.cx) && unit(box.cy) && unit(box.w) && unit(box.h) && box.w > 0.0 && box.h > 0.0;
}

BBox clamp_to_unit(const BBox &box) noexcept {
  const double l = std::clamp(box.left(), 0.0, 1.0);
  const double r = std::clamp(box.right(), 0.0, 1.0);
  const double t = std::clamp(box.top(), 0.0, 1.0);
  const double b = std::clamp(box.bottom(), 0.0, 1.0);
  if (l == box.left() && r == box.right() && t == box.top() && b == box.bottom()) return box;
  return BBox{(l + r) / 2.0, (t + b) / 2.0, r - l, b - t};
}

PixelBox to_pixels(const BBox &box, int img_w, int img_h) noexcept {
  return PixelBox{box.left() * img_w, box.top() * img_h, box.right() * img_w, box.bottom() * img_h};
}

ClassMap::ClassMap(std::vector<std::string> names, std::string_view source, std::string_view target)
    : names_(std::move(names)) {
  source_ = id_of(source);
  target_ = id_of(target);
  if (source_ < 0) throw Error(Errc::kConfig, "source class '" + std::string(source) + "' not in class list");
  if (target_ < 0) throw Error(Errc::kConfig, "target class '" + std::string(target) + "' not in class list");
  if (source_ == target_) throw Error(Errc::kConfig, "source and target class must differ");
}

int ClassMap::id_of(std::string_view name) const noexcept {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

namespace {

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_real(std::string_view field, std::size_t line) {
  double value = 0.0;
  const char *first = field.data();
  const char *last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(Errc::kParse, at_line(line) + "non-numeric field '" + std::string(field) + "'");
  }
  return value;
}

int parse_class(std::string_view field, std::size_t line, const ClassMap &classes) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(Errc::kParse, at_line(line) + "non-numeric class id '" + std::string(field) + "'");
  }
  if (!classes.contains(value)) {
    throw Error(Errc::kUnknownClass, at_line(line) + "unknown class id " + std::to_string(value));
  }
  return value;
}

BBox parse_box(const std::vector<std::string_view> &fields, std::size_t line) {
  BBox box{parse_real(fields[1], line), parse_real(fields[2], line), parse_real(fields[3], line),
           parse_real(fields[4], line)};
  if (box.cx < 0 || box.cx > 1 || box.cy < 0 || box.cy > 1) {
    throw Error(Errc::kOutOfRange, at_line(line) + "box center outside [0,1]");
  }
  if (box.w <= 0 || box.h <= 0) throw Error(Errc::kOutOfRange, at_line(line) + "zero-width or zero-height box");
  if (box.w > 1 || box.h > 1) throw Error(Errc::kOutOfRange, at_line(line) + "box size exceeds 1");
  return box;
}

// Calls fn(fields, line_no) for every nonempty line.
template <typename Fn>
void for_each_line(std::string_view text, std::size_t arity, Fn &&fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != arity) {
      throw Error(Errc::kParse, at_line(line_no) + "expected " + std::to_string(arity) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    fn(fields, line_no);
  }
}

void append_box(std::string &out, const BBox &b) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), " %.6f %.6f %.6f %.6f", b.cx, b.cy, b.w, b.h);
  out += buf;
}

}  // namespace

std::vector<Annotation> parse_labels(std::string_view text, const ClassMap &classes) {
  std::vector<Annotation> out;
  for_each_line(text, 5, [&](const std::vector<std::string_view> &fields, std::size_t line) {
    const int cls = parse_class(fields[0], line, classes);
    out.push_back(Annotation{cls, parse_box(fields, line)});
  });
  return out;
}

std::string emit_labels(const std::vector<Annotation> &anns) {
  std::string out;
  for (const auto &a : anns) {
    out += std::to_string(a.class_id);
    append_box(out, a.bbox);
    out += '\n';
  }
  return out;
}

std::vector<Detection> parse_detections(std::string_view text, const ClassMap &classes) {
  std::vector<Detection> out;
  for_each_line(text, 6, [&](const std::vector<std::string_view> &fields, std::size_t line) {
    const int cls = parse_class(fields[0], line, classes);
    const BBox box = parse_box(fields, line);
    const double conf = parse_real(fields[5], line);
    if (conf < 0.0 || conf > 1.0) throw Error(Errc::kOutOfRange, at_line(line) + "confidence outside [0,1]");
    out.push_back(Detection{cls, box, conf});
  });
  return out;
}

std::string emit_detections(const std::vector<Detection> &dets) {
  std::string out;
  for (const auto &d : dets) {
    out += std::to_string(d.class_id);
    append_box(out, d.bbox);
    char buf[32];
    std::snprintf(buf, sizeof(buf), " %.6f\n", d.confidence);
    out += buf;
  }
  return out;
}

double iou(const BBox &a, const BBox &b) noexcept {
  const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double area_a = (a.right() - a.left()) * (a.bottom() - a.top());
  const double area_b = (b.right() - b.left()) * (b.bottom() - b.top());
  const double uni = area_a + area_b - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace thermbd
