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

#include "thermbd/raster_io.hpp"

#include <fstream>
#include <iterator>
#include <string>

#include "thermbd/error.hpp"

namespace thermbd {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kBadMagic: return "bad-magic";
    case Errc::kBadHeader: return "bad-header";
    case Errc::kBadDimensions: return "bad-dimensions";
    case Errc::kBadMaxval: return "bad-maxval";
    case Errc::kTruncatedPayload: return "truncated-payload";
    case Errc::kParse: return "parse";
    case Errc::kOutOfRange: return "out-of-range";
    case Errc::kUnknownClass: return "unknown-class";
    case Errc::kDegenerateFit: return "degenerate-fit";
    case Errc::kNonMonotoneCalibration: return "non-monotone-calibration";
    case Errc::kBelowCalibrationRange: return "below-calibration-range";
    case Errc::kOutsideCalibrationRange: return "outside-calibration-range";
    case Errc::kMissingThermalMap: return "missing-thermal-map";
    case Errc::kDegenerateBox: return "degenerate-box";
    case Errc::kConfigContradiction: return "config-contradiction";
    case Errc::kCountExceedsPopulation: return "count-exceeds-population";
    case Errc::kTriggerOutsideImage: return "trigger-outside-image";
    case Errc::kIo: return "io";
    case Errc::kConfig: return "config";
  }
  return "unknown";
}

namespace {

// Largest side we accept; keeps a corrupted header from requesting gigabytes.
constexpr long kMaxSide = 1 << 16;

void check_dimensions(long width, long height) {
  if (width <= 0 || height <= 0 || width > kMaxSide || height > kMaxSide) {
    throw Error(Errc::kBadDimensions,
                "pgm: invalid dimensions " + std::to_string(width) + "x" + std::to_string(height));
  }
}

bool is_space(std::uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  // Reads a decimal integer with optional sign. The field must be followed by
  // whitespace (or a comment), never directly by payload.
  long integer(const char *field) {
    skip_space_and_comments();
    bool negative = false;
    if (pos_ < bytes_.size() && (bytes_[pos_] == '-' || bytes_[pos_] == '+')) {
      negative = bytes_[pos_] == '-';
      ++pos_;
    }
    std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      if (value < 100000000) value = value * 10 + (bytes_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) throw Error(Errc::kBadHeader, std::string("pgm: expected integer for ") + field);
    if (pos_ >= bytes_.size() || !(is_space(bytes_[pos_]) || bytes_[pos_] == '#')) {
      throw Error(Errc::kBadHeader, std::string("pgm: malformed ") + field);
    }
    return negative ? -value : value;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage::GrayImage(int width, int height, std::uint8_t fill) {
  check_dimensions(width, height);
  width_ = width;
  height_ = height;
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> data) {
  check_dimensions(width, height);
  if (data.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(Errc::kBadDimensions, "image data length does not match dimensions");
  }
  width_ = width;
  height_ = height;
  data_ = std::move(data);
}

GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw Error(Errc::kBadMagic, "pgm: missing P5 magic");
  }
  HeaderReader reader(bytes);
  reader.advance(2);
  if (reader.pos() >= bytes.size() || !(is_space(bytes[reader.pos()]) || bytes[reader.pos()] == '#')) {
    throw Error(Errc::kBadMagic, "pgm: magic not followed by whitespace");
  }
  const long width = reader.integer("width");
  const long height = reader.integer("height");
  check_dimensions(width, height);
  const long maxval = reader.integer("maxval");
  if (maxval != 255) throw Error(Errc::kBadMaxval, "pgm: maxval must be 255, got " + std::to_string(maxval));
  // Exactly one whitespace byte separates maxval from the raster.
  if (bytes[reader.pos()] == '#') throw Error(Errc::kBadHeader, "pgm: comment after maxval");
  reader.advance(1);

  const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - reader.pos() < expected) {
    throw Error(Errc::kTruncatedPayload, "pgm: payload has " + std::to_string(bytes.size() - reader.pos()) +
                                             " bytes, expected " + std::to_string(expected));
  }
  auto first = bytes.begin() + static_cast<std::ptrdiff_t>(reader.pos());
  return GrayImage(static_cast<int>(width), static_cast<int>(height),
                   std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(expected)));
}

std::vector<std::uint8_t> write_pgm(const GrayImage &img) {
  const std::string header = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out;
  out.reserve(header.size() + img.pixels().size());
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path &path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::kIo, "short write to " + path.string());
}

GrayImage load_pgm(const std::filesystem::path &path) { return read_pgm(read_file_bytes(path)); }

void save_pgm(const std::filesystem::path &path, const GrayImage &img) { write_file_bytes(path, write_pgm(img)); }

}  // namespace thermbd
