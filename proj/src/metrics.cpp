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

#include "thermbd/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "thermbd/error.hpp"

namespace thermbd {

void EvalConfig::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) throw Error(Errc::kConfig, "eval: iou_threshold must be in (0,1)");
  if (source_class == target_class) throw Error(Errc::kConfig, "eval: source and target class must differ");
}

std::vector<int> EvalConfig::effective_map_classes() const {
  if (!map_classes.empty()) return map_classes;
  return {source_class, target_class};
}

std::vector<Match> match_detections(const std::vector<Annotation> &gts, const std::vector<Detection> &dets,
                                    double iou_threshold) {
  std::vector<int> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return dets[static_cast<std::size_t>(a)].confidence > dets[static_cast<std::size_t>(b)].confidence;
  });

  std::vector<bool> taken(gts.size(), false);
  std::vector<Match> out;
  for (int d : order) {
    int best = -1;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) continue;
      const double v = iou(dets[static_cast<std::size_t>(d)].bbox, gts[g].bbox);
      if (v >= iou_threshold && v > best_iou) {
        best = static_cast<int>(g);
        best_iou = v;
      }
    }
    if (best >= 0) {
      taken[static_cast<std::size_t>(best)] = true;
      out.push_back(Match{d, best, best_iou});
    }
  }
  return out;
}

namespace {

bool covered_by_class(const Annotation &gt, const std::vector<Detection> &dets, int class_id, double thr) {
  return std::any_of(dets.begin(), dets.end(),
                     [&](const Detection &d) { return d.class_id == class_id && iou(gt.bbox, d.bbox) >= thr; });
}

}  // namespace

bool trigger_addition_success(const Annotation &gt, const std::vector<Detection> &clean_dets, const EvalConfig &cfg) {
  return gt.class_id == cfg.source_class && covered_by_class(gt, clean_dets, cfg.source_class, cfg.iou_threshold);
}

bool attack_success(const Annotation &gt, const std::vector<Detection> &dirty_dets, const EvalConfig &cfg) {
  if (cfg.goal == AttackGoal::kMisclassify) {
    return covered_by_class(gt, dirty_dets, cfg.target_class, cfg.iou_threshold);
  }
  return !covered_by_class(gt, dirty_dets, cfg.source_class, cfg.iou_threshold);
}

std::vector<RankedDetection> rank_image(const std::vector<Annotation> &gts, const std::vector<Detection> &dets,
                                        int class_id, double iou_threshold, int image_index) {
  std::vector<Annotation> class_gts;
  for (const auto &g : gts) {
    if (g.class_id == class_id) class_gts.push_back(g);
  }
  std::vector<Detection> class_dets;
  std::vector<int> original;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].class_id == class_id) {
      class_dets.push_back(dets[i]);
      original.push_back(static_cast<int>(i));
    }
  }
  std::vector<RankedDetection> out(class_dets.size());
  for (std::size_t i = 0; i < class_dets.size(); ++i) {
    out[i] = RankedDetection{class_dets[i].confidence, image_index, original[i], false};
  }
  for (const Match &m : match_detections(class_gts, class_dets, iou_threshold)) {
    out[static_cast<std::size_t>(m.detection)].true_positive = true;
  }
  return out;
}

double ap_from_ranked(std::vector<RankedDetection> ranked, std::size_t n_ground_truth) {
  if (n_ground_truth == 0) return 0.0;
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedDetection &a, const RankedDetection &b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.image != b.image) return a.image < b.image;
    return a.index < b.index;
  });

  // Precision/recall after each ranked detection.
  std::vector<double> recall, precision;
  double tp = 0.0, fp = 0.0;
  for (const auto &r : ranked) {
    (r.true_positive ? tp : fp) += 1.0;
    recall.push_back(tp / static_cast<double>(n_ground_truth));
    precision.push_back(tp / (tp + fp));
  }

  // Envelope: precision at recall r is the best precision at any recall >= r.
  for (std::size_t i = precision.size(); i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);

  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < recall.size(); ++i) {
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return 100.0 * ap;
}

std::optional<double> average_precision(const std::vector<std::vector<Annotation>> &gts,
                                        const std::vector<std::vector<Detection>> &dets, int class_id,
                                        double iou_threshold) {
  std::size_t n_gt = 0;
  std::vector<RankedDetection> pooled;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    n_gt += static_cast<std::size_t>(std::count_if(gts[i].begin(), gts[i].end(),
                                                   [&](const Annotation &a) { return a.class_id == class_id; }));
    static const std::vector<Detection> kNone;
    const auto &image_dets = i < dets.size() ? dets[i] : kNone;
    auto ranked = rank_image(gts[i], image_dets, class_id, iou_threshold, static_cast<int>(i));
    pooled.insert(pooled.end(), ranked.begin(), ranked.end());
  }
  if (n_gt == 0) return std::nullopt;
  return ap_from_ranked(std::move(pooled), n_gt);
}

AttackCounts count_attack_outcomes(const EvalImage &image, const EvalConfig &cfg) {
  AttackCounts counts;
  auto visit = [&](const Annotation &gt) {
    if (gt.class_id != cfg.source_class) return;
    ++counts.source_objects;
    if (!trigger_addition_success(gt, image.backdoor_on_clean, cfg)) return;
    ++counts.n_ta;
    if (attack_success(gt, image.backdoor_on_triggered, cfg)) ++counts.n_sa;
  };
  if (image.attack_candidates) {
    for (int i : *image.attack_candidates) {
      if (i >= 0 && static_cast<std::size_t>(i) < image.ground_truth.size()) {
        visit(image.ground_truth[static_cast<std::size_t>(i)]);
      }
    }
  } else {
    for (const auto &gt : image.ground_truth) visit(gt);
  }
  return counts;
}

void finish_report(EvalReport &report, const EvalConfig &cfg) {
  report.asr.reset();
  if (report.n_ta > 0) report.asr = 100.0 * static_cast<double>(report.n_sa) / static_cast<double>(report.n_ta);

  auto mean_of = [&](const std::map<int, std::optional<double>> &ap) -> std::optional<double> {
    double sum = 0.0;
    int n = 0;
    for (int c : cfg.effective_map_classes()) {
      auto it = ap.find(c);
      if (it != ap.end() && it->second) {
        sum += *it->second;
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return sum / n;
  };
  report.map_clean_model = mean_of(report.ap_clean_model);
  report.map_backdoor_model = mean_of(report.ap_backdoor_model);

  report.baf.clear();
  for (const auto &[c, clean_ap] : report.ap_clean_model) {
    auto it = report.ap_backdoor_model.find(c);
    if (clean_ap && it != report.ap_backdoor_model.end() && it->second) {
      report.baf[c] = compute_baf(*it->second, *clean_ap);
    } else {
      report.baf[c] = std::nullopt;
    }
  }
  report.baf_map.reset();
  if (report.map_clean_model && report.map_backdoor_model) {
    report.baf_map = compute_baf(*report.map_backdoor_model, *report.map_clean_model);
  }
}

EvalReport evaluate_run(const std::vector<EvalImage> &images, const EvalConfig &cfg) {
  cfg.validate();
  EvalReport report;
  AttackCounts total;
  for (const auto &img : images) total += count_attack_outcomes(img, cfg);
  report.source_objects = total.source_objects;
  report.n_ta = total.n_ta;
  report.n_sa = total.n_sa;

  std::vector<std::vector<Annotation>> gts;
  std::vector<std::vector<Detection>> clean, backdoor;
  for (const auto &img : images) {
    gts.push_back(img.ground_truth);
    clean.push_back(img.clean_model_on_clean);
    backdoor.push_back(img.backdoor_on_clean);
  }
  for (int c : cfg.effective_map_classes()) {
    report.ap_clean_model[c] = average_precision(gts, clean, c, cfg.iou_threshold);
    report.ap_backdoor_model[c] = average_precision(gts, backdoor, c, cfg.iou_threshold);
  }
  finish_report(report, cfg);
  return report;
}

}  // namespace thermbd
