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

#ifndef THERMBD_KERNELS_HPP_
#define THERMBD_KERNELS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thermbd/metrics.hpp"
#include "thermbd/poison_oaa.hpp"
#include "thermbd/poison_raa.hpp"

namespace thermbd {

struct ImageSample {
  std::string id;
  GrayImage image;
  std::vector<Annotation> annotations;
};

// Per-image batch kernels. `serial` is the reference; `omp` must produce
// identical results for any thread count. Errors from any image are rethrown
// (lowest index first) after the batch completes.
namespace kernels {

namespace serial {

std::vector<ImageEdit> poison_oaa(std::span<const ImageSample> batch, std::span<const PoisonRole> roles,
                                  const OaaConfig &cfg, const ClassMap &classes, const ThermalMap *map);
/// levels[i] < 0 leaves image i clean.
std::vector<ImageEdit> poison_raa(std::span<const ImageSample> batch, std::span<const int> levels,
                                  const RaaConfig &cfg, const ClassMap &classes);
std::vector<ImageEdit> trigger_oaa(std::span<const ImageSample> batch, const OaaConfig &cfg, const ClassMap &classes,
                                   const ThermalMap *map, std::optional<std::uint8_t> intensity_override);
std::vector<ImageEdit> trigger_raa(std::span<const ImageSample> batch, const RaaConfig &cfg, std::uint8_t pixel);
EvalReport evaluate(const std::vector<EvalImage> &images, const EvalConfig &cfg);

}  // namespace serial

namespace omp {

/// threads <= 0 uses the OpenMP default.
std::vector<ImageEdit> poison_oaa(std::span<const ImageSample> batch, std::span<const PoisonRole> roles,
                                  const OaaConfig &cfg, const ClassMap &classes, const ThermalMap *map, int threads);
std::vector<ImageEdit> poison_raa(std::span<const ImageSample> batch, std::span<const int> levels,
                                  const RaaConfig &cfg, const ClassMap &classes, int threads);
std::vector<ImageEdit> trigger_oaa(std::span<const ImageSample> batch, const OaaConfig &cfg, const ClassMap &classes,
                                   const ThermalMap *map, std::optional<std::uint8_t> intensity_override,
                                   int threads);
std::vector<ImageEdit> trigger_raa(std::span<const ImageSample> batch, const RaaConfig &cfg, std::uint8_t pixel,
                                   int threads);
EvalReport evaluate(const std::vector<EvalImage> &images, const EvalConfig &cfg, int threads);

}  // namespace omp

}  // namespace kernels

/// Selects serial (threads == 1) or OpenMP kernels.
struct ExecPolicy {
  int threads = 1;

  bool serial() const noexcept { return threads == 1; }
};

int max_threads() noexcept;

}  // namespace thermbd

#endif  // THERMBD_KERNELS_HPP_
