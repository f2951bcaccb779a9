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

#include <cmath>

#include "thermbd/error.hpp"
#include "thermbd/thermal_map.hpp"

namespace thermbd {
namespace {

std::vector<CalibrationSample> synthesize(const ThermalMap &truth, std::initializer_list<double> temps) {
  std::vector<CalibrationSample> out;
  for (double t : temps) out.push_back({t, truth.lambda_coeff * std::pow(t, truth.exponent_m) + truth.phi_offset});
  return out;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

TEST(ThermalMap, FitRecoversReferenceCoefficients) {
  const auto samples = synthesize(kReferenceMap, {20, 25, 30, 35, 40});
  const ThermalMap m = fit(samples, 4.0);
  EXPECT_LT(rel(m.lambda_coeff, 1.4221e-4), 1e-9);
  EXPECT_LT(rel(m.phi_offset, -15.4760), 1e-9);
  for (const auto &s : samples) EXPECT_LT(std::abs(m.response(s.temperature) - s.pixel), 1e-9 * 255);
}

TEST(ThermalMap, FitRecoversArbitraryMaps) {
  for (double m : {3.9889, 4.0, 2.0}) {
    const ThermalMap truth{3.3e-3, 12.5, m};
    const ThermalMap got = fit(synthesize(truth, {5, 11, 17.5, 23, 29.25, 31}), m);
    EXPECT_LT(rel(got.lambda_coeff, truth.lambda_coeff), 1e-9);
    EXPECT_LT(rel(got.phi_offset, truth.phi_offset), 1e-9);
  }
}

TEST(ThermalMap, TwoSamplesInterpolateExactly) {
  const std::vector<CalibrationSample> s{{25.0, 40.0}, {35.0, 200.0}};
  const ThermalMap m = fit(s, 4.0);
  EXPECT_NEAR(m.response(25.0), 40.0, 1e-9);
  EXPECT_NEAR(m.response(35.0), 200.0, 1e-9);
}

TEST(ThermalMap, FitErrors) {
  try {
    fit({{30, 10}, {30, 20}, {30, 30}}, 4.0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), Errc::kDegenerateFit);
  }
  EXPECT_THROW(fit({{30, 10}}, 4.0), Error);
  try {
    fit({{20, 200}, {30, 100}}, 4.0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), Errc::kNonMonotoneCalibration);
  }
}

TEST(ThermalMap, ForwardMapReferenceValues) {
  // 1.4221e-4 * 26.6^4 - 15.476 = 55.72; 36.8 -> 245.33.
  EXPECT_EQ(temp_to_pixel(kReferenceMap, 26.6).value, 56);
  EXPECT_EQ(temp_to_pixel(kReferenceMap, 36.8).value, 245);
  EXPECT_FALSE(temp_to_pixel(kReferenceMap, 36.8).clamped);
}

TEST(ThermalMap, RootMapsToZero) {
  const double root = kReferenceMap.root_temperature();
  EXPECT_NEAR(root, 18.162772624950374, 1e-9);
  EXPECT_EQ(temp_to_pixel(kReferenceMap, root).value, 0);
  EXPECT_NEAR(pixel_to_temp(kReferenceMap, 0.0), root, 1e-12);
}

TEST(ThermalMap, Clamping) {
  const PixelLevel cold = temp_to_pixel(kReferenceMap, 5.0);
  EXPECT_EQ(cold.value, 0);
  EXPECT_TRUE(cold.clamped);
  const PixelLevel hot = temp_to_pixel(kReferenceMap, 60.0);
  EXPECT_EQ(hot.value, 255);
  EXPECT_TRUE(hot.clamped);
}

TEST(ThermalMap, Inverse) {
  EXPECT_NEAR(pixel_to_temp(kReferenceMap, 245), 36.7882724699402, 1e-9);
  try {
    pixel_to_temp(ThermalMap{1e-4, 10.0, 4.0}, 5.0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), Errc::kBelowCalibrationRange);
  }
}

TEST(ThermalMap, ExhaustiveRoundTrip) {
  for (const ThermalMap &map : {kReferenceMap, ThermalMap{1.4221e-4, -15.4760, 3.9889}}) {
    for (int p = 0; p < 256; ++p) {
      const int back = temp_to_pixel(map, pixel_to_temp(map, p)).value;
      EXPECT_LE(std::abs(back - p), 1) << p;
    }
  }
}

TEST(ThermalMap, Monotone) {
  int prev = 0;
  for (double t = -20.0; t <= 60.0; t += 0.01) {
    const int p = temp_to_pixel(kReferenceMap, t).value;
    EXPECT_GE(p, prev);
    prev = p;
  }
}

TEST(ThermalMap, CsvParsing) {
  const auto s = parse_calibration_csv("temperature,pixel\n20,7.2776\n\n25, 40.1\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s[1].temperature, 25.0);
  EXPECT_DOUBLE_EQ(s[1].pixel, 40.1);
  try {
    parse_calibration_csv("20,7\n25;40\n");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), Errc::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_calibration_csv("20,300\n"), Error);
}

}  // namespace
}  // namespace thermbd
