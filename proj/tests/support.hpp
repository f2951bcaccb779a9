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

#ifndef THERMBD_TESTS_SUPPORT_HPP_
#define THERMBD_TESTS_SUPPORT_HPP_

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "thermbd/annotations.hpp"
#include "thermbd/dataset.hpp"
#include "thermbd/raster_io.hpp"

namespace thermbd::testing {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "thermbd-XXXXXX").string();
    path_ = mkdtemp(tmpl.data());
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const fs::path &path() const { return path_; }

 private:
  fs::path path_;
};

inline ClassMap fixture_classes() { return ClassMap({"person", "car", "bicycle"}, "car", "person"); }
constexpr int kPerson = 0;
constexpr int kCar = 1;
constexpr int kBicycle = 2;

inline GrayImage random_image(std::mt19937_64 &rng, int w, int h) {
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h);
  for (auto &p : data) p = static_cast<std::uint8_t>(rng() & 0xFF);
  return GrayImage(w, h, std::move(data));
}

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64 &rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Box with coordinates on a 1e-6 grid, fully inside the unit square.
inline BBox random_bbox(std::mt19937_64 &rng, double min_size = 0.02, double max_size = 0.4) {
  auto q6 = [](double v) { return std::round(v * 1e6) / 1e6; };
  const double w = q6(uniform(rng, min_size, max_size));
  const double h = q6(uniform(rng, min_size, max_size));
  const double cx = q6(uniform(rng, w / 2 + 1e-6, 1 - w / 2 - 1e-6));
  const double cy = q6(uniform(rng, h / 2 + 1e-6, 1 - h / 2 - 1e-6));
  return BBox{cx, cy, w, h};
}

inline std::vector<Annotation> random_annotations(std::mt19937_64 &rng, int max_objects, int n_classes) {
  std::vector<Annotation> out(static_cast<std::size_t>(uniform_int(rng, 0, max_objects)));
  for (auto &a : out) a = Annotation{uniform_int(rng, 0, n_classes - 1), random_bbox(rng)};
  return out;
}

/// Writes a synthetic dataset: noise images of w x h with 0..5 random objects.
/// Image i of each split contains at least one car when i % 4 != 3.
inline void make_fixture_dataset(const fs::path &root, int n_train, int n_test, std::uint64_t seed, int w = 320,
                                 int h = 256) {
  std::mt19937_64 rng(seed);
  Manifest m{{"person", "car", "bicycle"}, "car", "person", {"train", "test"}};
  save_manifest(root, m);
  auto write_split = [&](const std::string &split, int n) {
    for (int i = 0; i < n; ++i) {
      char stem[32];
      std::snprintf(stem, sizeof(stem), "img_%04d", i);
      auto anns = random_annotations(rng, 5, 3);
      if (i % 4 != 3) {
        anns.push_back(Annotation{kCar, random_bbox(rng, 0.05, 0.3)});
      } else {
        std::erase_if(anns, [](const Annotation &a) { return a.class_id == kCar; });
      }
      save_pgm(image_path(root, split, stem), random_image(rng, w, h));
      write_text(label_path(root, split, stem), emit_labels(anns));
    }
  };
  write_split("train", n_train);
  write_split("test", n_test);
}

/// Byte-level comparison of two directory trees.
inline bool trees_identical(const fs::path &a, const fs::path &b, std::string *why = nullptr) {
  std::vector<fs::path> fa, fb;
  for (const auto &e : fs::recursive_directory_iterator(a)) {
    if (e.is_regular_file()) fa.push_back(fs::relative(e.path(), a));
  }
  for (const auto &e : fs::recursive_directory_iterator(b)) {
    if (e.is_regular_file()) fb.push_back(fs::relative(e.path(), b));
  }
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  if (fa != fb) {
    if (why) *why = "file lists differ";
    return false;
  }
  for (const auto &rel : fa) {
    if (read_file_bytes(a / rel) != read_file_bytes(b / rel)) {
      if (why) *why = "content differs: " + rel.string();
      return false;
    }
  }
  return true;
}

}  // namespace thermbd::testing

#endif  // THERMBD_TESTS_SUPPORT_HPP_
