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

#ifndef THERMBD_METRICS_HPP_
#define THERMBD_METRICS_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thermbd/annotations.hpp"
#include "thermbd/poison_plan.hpp"

namespace thermbd {

struct EvalConfig {
  double iou_threshold = 0.5;
  int source_class = 0;
  int target_class = 1;
  AttackGoal goal = AttackGoal::kMisclassify;
  /// Classes averaged into mAP; empty means {source, target}.
  std::vector<int> map_classes;

  void validate() const;
  std::vector<int> effective_map_classes() const;
};

struct Match {
  int detection = 0;
  int ground_truth = 0;
  double iou = 0.0;

  friend bool operator==(const Match &, const Match &) = default;
};

/// Greedy one-to-one matching, class-agnostic. Detections are visited by
/// descending confidence (input order on ties); each takes the unmatched
/// ground truth of highest IOU >= threshold (lowest index on ties).
std::vector<Match> match_detections(const std::vector<Annotation> &gts, const std::vector<Detection> &dets,
                                    double iou_threshold);

/// Backdoor model on the clean image recognizes the object as the source class.
bool trigger_addition_success(const Annotation &gt, const std::vector<Detection> &clean_dets, const EvalConfig &cfg);

/// Misclassify: a target-class detection covers the object. Disappear: no
/// source-class detection covers it.
bool attack_success(const Annotation &gt, const std::vector<Detection> &dirty_dets, const EvalConfig &cfg);

/// One detection of a class, flagged true/false positive within its image.
struct RankedDetection {
  double confidence = 0.0;
  int image = 0;
  int index = 0;
  bool true_positive = false;
};

/// Ranking entries for one image: class-filtered greedy matching.
std::vector<RankedDetection> rank_image(const std::vector<Annotation> &gts, const std::vector<Detection> &dets,
                                        int class_id, double iou_threshold, int image_index);

/// All-point interpolated AP (percent) from the pooled entries of every image.
double ap_from_ranked(std::vector<RankedDetection> ranked, std::size_t n_ground_truth);

/// All-point AP in percent; nullopt when the class never occurs in ground truth.
std::optional<double> average_precision(const std::vector<std::vector<Annotation>> &gts,
                                        const std::vector<std::vector<Detection>> &dets, int class_id,
                                        double iou_threshold);

/// Backdoor-model minus clean-model mAP on clean samples, in percentage points.
inline double compute_baf(double map_backdoor_clean, double map_clean_clean) {
  return map_backdoor_clean - map_clean_clean;
}

/// Ground truth and the three detector outputs for one test image.
struct EvalImage {
  std::string id;
  std::vector<Annotation> ground_truth;
  std::vector<Detection> clean_model_on_clean;
  std::vector<Detection> backdoor_on_clean;
  std::vector<Detection> backdoor_on_triggered;
  /// Source-class objects eligible for ASR (RAA test range). nullopt: all.
  std::optional<std::vector<int>> attack_candidates;
};

struct AttackCounts {
  long source_objects = 0;
  long n_ta = 0;
  long n_sa = 0;

  AttackCounts &operator+=(const AttackCounts &o) {
    source_objects += o.source_objects;
    n_ta += o.n_ta;
    n_sa += o.n_sa;
    return *this;
  }
};

AttackCounts count_attack_outcomes(const EvalImage &image, const EvalConfig &cfg);

struct EvalReport {
  long source_objects = 0;
  long n_ta = 0;
  long n_sa = 0;
  std::optional<double> asr;  // percent; undefined when n_ta == 0
  std::map<int, std::optional<double>> ap_clean_model;
  std::map<int, std::optional<double>> ap_backdoor_model;
  std::optional<double> map_clean_model;
  std::optional<double> map_backdoor_model;
  std::map<int, std::optional<double>> baf;
  std::optional<double> baf_map;
  std::vector<std::string> warnings;
};

/// Serial reference composition; see kernels for the OpenMP variant.
EvalReport evaluate_run(const std::vector<EvalImage> &images, const EvalConfig &cfg);

/// Fills the AP/mAP/BAF fields from per-class AP maps.
void finish_report(EvalReport &report, const EvalConfig &cfg);

}  // namespace thermbd

#endif  // THERMBD_METRICS_HPP_
