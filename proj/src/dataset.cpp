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

#include "thermbd/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "thermbd/error.hpp"

namespace thermbd {

using json = nlohmann::ordered_json;

Manifest load_manifest(const fs::path &root) {
  const fs::path path = root / kManifestName;
  json j;
  try {
    j = json::parse(read_text(path));
    Manifest m;
    m.classes = j.at("classes").get<std::vector<std::string>>();
    m.source_class = j.at("source_class").get<std::string>();
    m.target_class = j.at("target_class").get<std::string>();
    m.splits = j.value("splits", std::vector<std::string>{"train", "test"});
    (void)m.class_map();
    return m;
  } catch (const json::exception &e) {
    throw Error(Errc::kConfig, path.string() + ": " + e.what());
  }
}

void save_manifest(const fs::path &root, const Manifest &manifest) {
  json j;
  j["classes"] = manifest.classes;
  j["source_class"] = manifest.source_class;
  j["target_class"] = manifest.target_class;
  j["splits"] = manifest.splits;
  write_text(root / kManifestName, j.dump(2) + "\n");
}

fs::path image_path(const fs::path &root, const std::string &split, const std::string &stem) {
  return root / "images" / split / (stem + ".pgm");
}

fs::path label_path(const fs::path &root, const std::string &split, const std::string &stem) {
  return root / "labels" / split / (stem + ".txt");
}

namespace {

std::vector<std::string> stems_with_extension(const fs::path &dir, const std::string &ext) {
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) out.push_back(entry.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::string> list_stems(const fs::path &root, const std::string &split) {
  const fs::path dir = root / "images" / split;
  if (!fs::is_directory(dir)) throw Error(Errc::kIo, "missing image directory " + dir.string());
  return stems_with_extension(dir, ".pgm");
}

std::vector<std::string> list_text_stems(const fs::path &dir) { return stems_with_extension(dir, ".txt"); }

std::string read_text(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path &path, const std::string &text) {
  write_file_bytes(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t *>(text.data()), text.size()));
}

std::vector<Annotation> load_labels(const fs::path &path, const ClassMap &classes) {
  if (!fs::exists(path)) return {};
  try {
    return parse_labels(read_text(path), classes);
  } catch (const Error &e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

ImageSample load_sample(const fs::path &root, const std::string &split, const std::string &stem,
                        const ClassMap &classes) {
  ImageSample s;
  s.id = stem;
  const fs::path img = image_path(root, split, stem);
  try {
    s.image = load_pgm(img);
  } catch (const Error &e) {
    throw Error(e.code(), img.string() + ": " + e.what());
  }
  s.annotations = load_labels(label_path(root, split, stem), classes);
  return s;
}

void copy_exact(const fs::path &from, const fs::path &to) {
  if (to.has_parent_path()) fs::create_directories(to.parent_path());
  fs::copy_file(from, to, fs::copy_options::overwrite_existing);
}

void copy_tree(const fs::path &from, const fs::path &to) {
  if (!fs::is_directory(from)) return;
  fs::create_directories(to);
  fs::copy(from, to, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

void prepare_output(const fs::path &out, const fs::path &input_root, const std::string &marker) {
  const fs::path out_abs = fs::weakly_canonical(out);
  const fs::path in_abs = fs::weakly_canonical(input_root);
  auto rel = out_abs.lexically_relative(in_abs);
  if (out_abs == in_abs || (!rel.empty() && *rel.begin() != "..")) {
    throw Error(Errc::kConfig, "output " + out.string() + " must not be inside the input dataset");
  }
  rel = in_abs.lexically_relative(out_abs);
  if (!rel.empty() && *rel.begin() != "..") {
    throw Error(Errc::kConfig, "output " + out.string() + " must not contain the input dataset");
  }
  if (fs::exists(out)) {
    if (!fs::is_directory(out)) throw Error(Errc::kIo, out.string() + " exists and is not a directory");
    if (fs::exists(out / marker)) {
      fs::remove_all(out);
    } else if (!fs::is_empty(out)) {
      throw Error(Errc::kIo, out.string() + " is not empty and was not produced by a previous run");
    }
  }
  fs::create_directories(out);
}

}  // namespace thermbd
