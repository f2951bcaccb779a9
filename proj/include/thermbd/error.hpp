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

#ifndef THERMBD_ERROR_HPP_
#define THERMBD_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace thermbd {

/// Classified failure reasons. Every error thrown by the library carries one.
enum class Errc {
  // raster_io
  kBadMagic,
  kBadHeader,
  kBadDimensions,
  kBadMaxval,
  kTruncatedPayload,
  // annotations
  kParse,
  kOutOfRange,
  kUnknownClass,
  // thermal_map
  kDegenerateFit,
  kNonMonotoneCalibration,
  kBelowCalibrationRange,
  kOutsideCalibrationRange,
  // trigger / poisoning
  kMissingThermalMap,
  kDegenerateBox,
  kConfigContradiction,
  kCountExceedsPopulation,
  kTriggerOutsideImage,
  // plumbing
  kIo,
  kConfig,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string &what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace thermbd

#endif  // THERMBD_ERROR_HPP_
