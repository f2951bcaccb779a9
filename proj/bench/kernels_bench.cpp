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

// Serial reference kernels against their OpenMP counterparts.
// Run: ./build/bench/thermbd_bench [--benchmark_filter=Oaa]

#include <benchmark/benchmark.h>

#include <random>

#include "thermbd/kernels.hpp"

namespace thermbd {
namespace {

const ClassMap &classes() {
  static const ClassMap c({"person", "car", "bicycle"}, "car", "person");
  return c;
}

std::vector<ImageSample> make_batch(int n, int w, int h) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> px(0, 255), count(1, 6), cls(0, 2);
  std::uniform_real_distribution<double> size(0.05, 0.3), pos(0.0, 1.0);
  std::vector<ImageSample> out;
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w) * h);
    for (auto &p : pixels) p = static_cast<std::uint8_t>(px(rng));
    std::vector<Annotation> anns;
    for (int k = count(rng); k > 0; --k) {
      const double bw = size(rng), bh = size(rng);
      anns.push_back({cls(rng), {bw / 2 + pos(rng) * (1 - bw), bh / 2 + pos(rng) * (1 - bh), bw, bh}});
    }
    out.push_back({"img" + std::to_string(i), GrayImage(w, h, std::move(pixels)), std::move(anns)});
  }
  return out;
}

const std::vector<ImageSample> &batch() {
  static const auto b = make_batch(256, 640, 512);
  return b;
}

RaaConfig raa_config() {
  RaaConfig cfg;
  cfg.radius_table = RadiusTable({{0, 80.0}, {128, 120.0}, {255, 160.0}});
  return cfg;
}

std::vector<EvalImage> eval_images() {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> jitter(0.0, 0.02);
  std::uniform_real_distribution<double> conf(0.05, 1.0);
  std::vector<EvalImage> out;
  for (const auto &s : make_batch(2000, 8, 8)) {
    EvalImage img;
    img.id = s.id;
    img.ground_truth = s.annotations;
    for (const auto &a : s.annotations) {
      auto det = [&](int c) { return Detection{c, {a.bbox.cx + jitter(rng), a.bbox.cy + jitter(rng), a.bbox.w, a.bbox.h}, conf(rng)}; };
      img.clean_model_on_clean.push_back(det(a.class_id));
      img.backdoor_on_clean.push_back(det(a.class_id));
      img.backdoor_on_triggered.push_back(det(a.class_id == 1 ? 0 : a.class_id));
    }
    out.push_back(std::move(img));
  }
  return out;
}

void BM_PoisonOaa(benchmark::State &state) {
  const int threads = static_cast<int>(state.range(0));
  const std::vector<PoisonRole> roles(batch().size(), PoisonRole::kNormal);
  const OaaConfig cfg;
  for (auto _ : state) {
    auto out = threads == 0 ? kernels::serial::poison_oaa(batch(), roles, cfg, classes(), nullptr)
                            : kernels::omp::poison_oaa(batch(), roles, cfg, classes(), nullptr, threads);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(batch().size()));
}

void BM_PoisonRaa(benchmark::State &state) {
  const int threads = static_cast<int>(state.range(0));
  const std::vector<int> levels(batch().size(), 255);
  const RaaConfig cfg = raa_config();
  for (auto _ : state) {
    auto out = threads == 0 ? kernels::serial::poison_raa(batch(), levels, cfg, classes())
                            : kernels::omp::poison_raa(batch(), levels, cfg, classes(), threads);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(batch().size()));
}

void BM_Evaluate(benchmark::State &state) {
  const int threads = static_cast<int>(state.range(0));
  static const auto images = eval_images();
  EvalConfig cfg;
  cfg.source_class = 1;
  cfg.target_class = 0;
  for (auto _ : state) {
    auto r = threads == 0 ? kernels::serial::evaluate(images, cfg) : kernels::omp::evaluate(images, cfg, threads);
    benchmark::DoNotOptimize(r.n_sa);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(images.size()));
}

// Argument 0 selects the serial reference; positive values are OpenMP thread counts.
void thread_args(benchmark::internal::Benchmark *b) {
  b->Arg(0);
  for (int t = 1; t <= std::max(1, max_threads()); t *= 2) b->Arg(t);
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

BENCHMARK(BM_PoisonOaa)->Apply(thread_args);
BENCHMARK(BM_PoisonRaa)->Apply(thread_args);
BENCHMARK(BM_Evaluate)->Apply(thread_args);

}  // namespace
}  // namespace thermbd

BENCHMARK_MAIN();
