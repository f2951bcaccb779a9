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

#ifndef THERMBD_THERMAL_MAP_HPP_
#define THERMBD_THERMAL_MAP_HPP_

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

namespace thermbd {

/// Camera response p = lambda * T^m + phi, T in degrees Celsius.
struct ThermalMap {
  double lambda_coeff = 1.4221e-4;
  double phi_offset = -15.4760;
  double exponent_m = 4.0;

  /// Unrounded response. Temperatures below zero contribute no T^m term.
  double response(double celsius) const noexcept;
  /// Temperature at which the response crosses zero.
  double root_temperature() const;
};

/// Reference camera calibration used when a config gives no thermal_map.
inline constexpr ThermalMap kReferenceMap{1.4221e-4, -15.4760, 4.0};

struct CalibrationSample {
  double temperature = 0.0;  // degC
  double pixel = 0.0;
};

/// Ordinary least squares of pixel against T^m.
/// Throws kDegenerateFit with fewer than two distinct temperatures and
/// kNonMonotoneCalibration when the fitted lambda is not positive.
ThermalMap fit(const std::vector<CalibrationSample> &samples, double m = 4.0);

struct PixelLevel {
  std::uint8_t value = 0;
  bool clamped = false;
};

/// clamp(round_half_away(lambda * T^m + phi), 0, 255).
PixelLevel temp_to_pixel(const ThermalMap &map, double celsius);

/// ((p - phi) / lambda)^(1/m). Throws kBelowCalibrationRange when p < phi.
double pixel_to_temp(const ThermalMap &map, double pixel);

/// Two-column "temperature,pixel" CSV; a non-numeric first line is treated as a header.
std::vector<CalibrationSample> parse_calibration_csv(std::string_view text);
std::vector<CalibrationSample> load_calibration_csv(const std::filesystem::path &path);

}  // namespace thermbd

#endif  // THERMBD_THERMAL_MAP_HPP_
