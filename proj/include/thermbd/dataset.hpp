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

#ifndef THERMBD_DATASET_HPP_
#define THERMBD_DATASET_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "thermbd/annotations.hpp"
#include "thermbd/kernels.hpp"

namespace thermbd {

namespace fs = std::filesystem;

/// Dataset layout:
///   <root>/manifest.json
///   <root>/images/<split>/<stem>.pgm
///   <root>/labels/<split>/<stem>.txt   (missing file = no objects)
struct Manifest {
  std::vector<std::string> classes;
  std::string source_class;
  std::string target_class;
  std::vector<std::string> splits;

  ClassMap class_map() const { return ClassMap(classes, source_class, target_class); }
};

inline constexpr const char *kManifestName = "manifest.json";

Manifest load_manifest(const fs::path &root);
void save_manifest(const fs::path &root, const Manifest &manifest);

fs::path image_path(const fs::path &root, const std::string &split, const std::string &stem);
fs::path label_path(const fs::path &root, const std::string &split, const std::string &stem);

/// Sorted stems of every .pgm under images/<split>.
std::vector<std::string> list_stems(const fs::path &root, const std::string &split);

/// Sorted stems of every .txt directly under dir.
std::vector<std::string> list_text_stems(const fs::path &dir);

std::string read_text(const fs::path &path);
void write_text(const fs::path &path, const std::string &text);

/// Labels of one image; a missing file yields an empty list.
std::vector<Annotation> load_labels(const fs::path &path, const ClassMap &classes);
ImageSample load_sample(const fs::path &root, const std::string &split, const std::string &stem,
                        const ClassMap &classes);

/// Byte-exact copy; creates parent directories.
void copy_exact(const fs::path &from, const fs::path &to);
/// Recursive byte-exact copy of a directory (no-op when from is absent).
void copy_tree(const fs::path &from, const fs::path &to);

/// Prepares a fresh output directory. An existing directory is replaced only
/// when it contains `marker` (left by a previous run); otherwise it must be empty.
/// Refuses outputs equal to or nested inside `input_root`.
void prepare_output(const fs::path &out, const fs::path &input_root, const std::string &marker);

}  // namespace thermbd

#endif  // THERMBD_DATASET_HPP_
