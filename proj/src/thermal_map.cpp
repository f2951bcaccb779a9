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

#include "thermbd/thermal_map.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "thermbd/error.hpp"
#include "thermbd/raster_io.hpp"

namespace thermbd {

double ThermalMap::response(double celsius) const noexcept {
  return lambda_coeff * std::pow(std::max(celsius, 0.0), exponent_m) + phi_offset;
}

double ThermalMap::root_temperature() const { return pixel_to_temp(*this, 0.0); }

ThermalMap fit(const std::vector<CalibrationSample> &samples, double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw Error(Errc::kDegenerateFit, "fit: exponent must be positive");
  if (samples.size() < 2) throw Error(Errc::kDegenerateFit, "fit: need at least two samples");

  // Centered normal equations; the T^m regressor spans several decades.
  const double n = static_cast<double>(samples.size());
  double mean_x = 0.0, mean_p = 0.0;
  for (const auto &s : samples) {
    if (!std::isfinite(s.temperature) || !std::isfinite(s.pixel)) {
      throw Error(Errc::kDegenerateFit, "fit: non-finite sample");
    }
    mean_x += std::pow(std::max(s.temperature, 0.0), m);
    mean_p += s.pixel;
  }
  mean_x /= n;
  mean_p /= n;

  double sxx = 0.0, sxp = 0.0;
  for (const auto &s : samples) {
    const double dx = std::pow(std::max(s.temperature, 0.0), m) - mean_x;
    sxx += dx * dx;
    sxp += dx * (s.pixel - mean_p);
  }
  const bool distinct = std::any_of(samples.begin(), samples.end(), [&](const CalibrationSample &s) {
    return s.temperature != samples.front().temperature;
  });
  if (!distinct || !(sxx > 0.0)) throw Error(Errc::kDegenerateFit, "fit: fewer than two distinct temperatures");

  ThermalMap map;
  map.exponent_m = m;
  map.lambda_coeff = sxp / sxx;
  map.phi_offset = mean_p - map.lambda_coeff * mean_x;
  if (!(map.lambda_coeff > 0.0)) {
    throw Error(Errc::kNonMonotoneCalibration, "fit: pixel does not increase with temperature");
  }
  return map;
}

PixelLevel temp_to_pixel(const ThermalMap &map, double celsius) {
  const double p = std::round(map.response(celsius));
  PixelLevel out;
  if (p < 0.0) {
    out = {0, true};
  } else if (p > 255.0) {
    out = {255, true};
  } else {
    out = {static_cast<std::uint8_t>(p), false};
  }
  return out;
}

double pixel_to_temp(const ThermalMap &map, double pixel) {
  const double base = (pixel - map.phi_offset) / map.lambda_coeff;
  if (base < 0.0) {
    throw Error(Errc::kBelowCalibrationRange,
                "pixel " + std::to_string(pixel) + " is below the calibration range");
  }
  return std::pow(base, 1.0 / map.exponent_m);
}

std::vector<CalibrationSample> parse_calibration_csv(std::string_view text) {
  std::vector<CalibrationSample> out;
  std::size_t line_no = 0;
  auto parse = [](std::string_view field, double &value) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    return ec == std::errc() && ptr == field.data() + field.size() && !field.empty() && std::isfinite(value);
  };
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    const std::size_t comma = line.find(',');
    CalibrationSample s;
    const bool ok = comma != std::string_view::npos && line.find(',', comma + 1) == std::string_view::npos &&
                    parse(line.substr(0, comma), s.temperature) && parse(line.substr(comma + 1), s.pixel);
    if (!ok) {
      if (line_no == 1) continue;  // header
      throw Error(Errc::kParse, "line " + std::to_string(line_no) + ": expected 'temperature,pixel'");
    }
    if (s.pixel < 0.0 || s.pixel > 255.0) {
      throw Error(Errc::kOutOfRange, "line " + std::to_string(line_no) + ": pixel outside [0,255]");
    }
    out.push_back(s);
  }
  return out;
}

std::vector<CalibrationSample> load_calibration_csv(const std::filesystem::path &path) {
  const auto bytes = read_file_bytes(path);
  return parse_calibration_csv(std::string_view(reinterpret_cast<const char *>(bytes.data()), bytes.size()));
}

}  // namespace thermbd
