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

#include "thermbd/kernels.hpp"

#include <exception>

#include <omp.h>

namespace thermbd {

int max_threads() noexcept { return omp_get_max_threads(); }

namespace kernels {

namespace {

template <typename Fn>
std::vector<ImageEdit> map_serial(std::size_t n, Fn &&fn) {
  std::vector<ImageEdit> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
  return out;
}

template <typename Fn>
std::vector<ImageEdit> map_omp(std::size_t n, int threads, Fn &&fn) {
  std::vector<ImageEdit> out(n);
  std::vector<std::exception_ptr> errors(n);
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 4) num_threads(nt)
  for (long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

ImageEdit raa_one(const ImageSample &s, int level, const RaaConfig &cfg, const ClassMap &classes) {
  if (level < 0) return poison_image_oaa(s.image, s.annotations, OaaConfig{}, PoisonRole::kClean, classes, nullptr);
  return poison_image_raa(s.image, s.annotations, cfg, static_cast<std::uint8_t>(level), classes);
}

}  // namespace

namespace serial {

std::vector<ImageEdit> poison_oaa(std::span<const ImageSample> batch, std::span<const PoisonRole> roles,
                                  const OaaConfig &cfg, const ClassMap &classes, const ThermalMap *map) {
  return map_serial(batch.size(), [&](std::size_t i) {
    return poison_image_oaa(batch[i].image, batch[i].annotations, cfg, roles[i], classes, map);
  });
}

std::vector<ImageEdit> poison_raa(std::span<const ImageSample> batch, std::span<const int> levels,
                                  const RaaConfig &cfg, const ClassMap &classes) {
  return map_serial(batch.size(), [&](std::size_t i) { return raa_one(batch[i], levels[i], cfg, classes); });
}

std::vector<ImageEdit> trigger_oaa(std::span<const ImageSample> batch, const OaaConfig &cfg, const ClassMap &classes,
                                   const ThermalMap *map, std::optional<std::uint8_t> intensity_override) {
  return map_serial(batch.size(), [&](std::size_t i) {
    return trigger_test_image_oaa(batch[i].image, batch[i].annotations, cfg, classes, map, intensity_override);
  });
}

std::vector<ImageEdit> trigger_raa(std::span<const ImageSample> batch, const RaaConfig &cfg, std::uint8_t pixel) {
  return map_serial(batch.size(),
                    [&](std::size_t i) { return trigger_test_image_raa(batch[i].image, batch[i].annotations, cfg, pixel); });
}

EvalReport evaluate(const std::vector<EvalImage> &images, const EvalConfig &cfg) { return evaluate_run(images, cfg); }

}  // namespace serial

namespace omp {

std::vector<ImageEdit> poison_oaa(std::span<const ImageSample> batch, std::span<const PoisonRole> roles,
                                  const OaaConfig &cfg, const ClassMap &classes, const ThermalMap *map, int threads) {
  return map_omp(batch.size(), threads, [&](std::size_t i) {
    return poison_image_oaa(batch[i].image, batch[i].annotations, cfg, roles[i], classes, map);
  });
}

std::vector<ImageEdit> poison_raa(std::span<const ImageSample> batch, std::span<const int> levels,
                                  const RaaConfig &cfg, const ClassMap &classes, int threads) {
  return map_omp(batch.size(), threads, [&](std::size_t i) { return raa_one(batch[i], levels[i], cfg, classes); });
}

std::vector<ImageEdit> trigger_oaa(std::span<const ImageSample> batch, const OaaConfig &cfg, const ClassMap &classes,
                                   const ThermalMap *map, std::optional<std::uint8_t> intensity_override,
                                   int threads) {
  return map_omp(batch.size(), threads, [&](std::size_t i) {
    return trigger_test_image_oaa(batch[i].image, batch[i].annotations, cfg, classes, map, intensity_override);
  });
}

std::vector<ImageEdit> trigger_raa(std::span<const ImageSample> batch, const RaaConfig &cfg, std::uint8_t pixel,
                                   int threads) {
  return map_omp(batch.size(), threads, [&](std::size_t i) {
    return trigger_test_image_raa(batch[i].image, batch[i].annotations, cfg, pixel);
  });
}

EvalReport evaluate(const std::vector<EvalImage> &images, const EvalConfig &cfg, int threads) {
  cfg.validate();
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  const long n = static_cast<long>(images.size());
  const std::vector<int> classes = cfg.effective_map_classes();
  const std::size_t nc = classes.size();

  // Integer counts, so the reduction order cannot change the result.
  long source_objects = 0, n_ta = 0, n_sa = 0;
  // ranked[c][i]: entries of class c in image i, for the clean and backdoor models.
  std::vector<std::vector<std::vector<RankedDetection>>> clean(nc, std::vector<std::vector<RankedDetection>>(images.size()));
  std::vector<std::vector<std::vector<RankedDetection>>> backdoor(nc, std::vector<std::vector<RankedDetection>>(images.size()));
  std::vector<std::vector<long>> gt_count(nc, std::vector<long>(images.size(), 0));

#pragma omp parallel for schedule(dynamic, 8) num_threads(nt) reduction(+ : source_objects, n_ta, n_sa)
  for (long i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const EvalImage &img = images[u];
    const AttackCounts c = count_attack_outcomes(img, cfg);
    source_objects += c.source_objects;
    n_ta += c.n_ta;
    n_sa += c.n_sa;
    for (std::size_t k = 0; k < nc; ++k) {
      clean[k][u] = rank_image(img.ground_truth, img.clean_model_on_clean, classes[k], cfg.iou_threshold,
                               static_cast<int>(i));
      backdoor[k][u] = rank_image(img.ground_truth, img.backdoor_on_clean, classes[k], cfg.iou_threshold,
                                  static_cast<int>(i));
      for (const auto &a : img.ground_truth) gt_count[k][u] += a.class_id == classes[k];
    }
  }

  EvalReport report;
  report.source_objects = source_objects;
  report.n_ta = n_ta;
  report.n_sa = n_sa;
  for (std::size_t k = 0; k < nc; ++k) {
    long total_gt = 0;
    for (long g : gt_count[k]) total_gt += g;
    std::vector<RankedDetection> pooled_clean, pooled_backdoor;
    for (std::size_t u = 0; u < images.size(); ++u) {
      pooled_clean.insert(pooled_clean.end(), clean[k][u].begin(), clean[k][u].end());
      pooled_backdoor.insert(pooled_backdoor.end(), backdoor[k][u].begin(), backdoor[k][u].end());
    }
    if (total_gt == 0) {
      report.ap_clean_model[classes[k]] = std::nullopt;
      report.ap_backdoor_model[classes[k]] = std::nullopt;
    } else {
      report.ap_clean_model[classes[k]] = ap_from_ranked(std::move(pooled_clean), static_cast<std::size_t>(total_gt));
      report.ap_backdoor_model[classes[k]] =
          ap_from_ranked(std::move(pooled_backdoor), static_cast<std::size_t>(total_gt));
    }
  }
  finish_report(report, cfg);
  return report;
}

}  // namespace omp

}  // namespace kernels

}  // namespace thermbd
