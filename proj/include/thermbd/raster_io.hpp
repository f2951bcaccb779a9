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

#ifndef THERMBD_RASTER_IO_HPP_
#define THERMBD_RASTER_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace thermbd {

/// 8-bit single-channel raster, row-major, origin top-left.
class GrayImage {
 public:
  GrayImage() = default;
  /// Zero-filled image. Throws kBadDimensions unless both sides are positive.
  GrayImage(int width, int height, std::uint8_t fill = 0);
  /// Throws kBadDimensions when data.size() != width * height.
  GrayImage(int width, int height, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }

  std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
  std::uint8_t &at(int x, int y) { return data_[index(x, y)]; }

  std::span<const std::uint8_t> pixels() const noexcept { return data_; }
  std::span<std::uint8_t> pixels() noexcept { return data_; }
  std::span<std::uint8_t> row(int y) noexcept {
    return std::span<std::uint8_t>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  friend bool operator==(const GrayImage &, const GrayImage &) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Decodes a binary PGM (P5, maxval 255). Comments ('#' to end of line) may
/// appear anywhere whitespace is allowed in the header.
GrayImage read_pgm(std::span<const std::uint8_t> bytes);

/// Canonical encoding: "P5\n<w> <h>\n255\n" followed by the raw pixels.
std::vector<std::uint8_t> write_pgm(const GrayImage &img);

GrayImage load_pgm(const std::filesystem::path &path);
void save_pgm(const std::filesystem::path &path, const GrayImage &img);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path &path);
void write_file_bytes(const std::filesystem::path &path, std::span<const std::uint8_t> bytes);

}  // namespace thermbd

#endif  // THERMBD_RASTER_IO_HPP_
