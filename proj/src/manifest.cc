// Copyright 2026 The Dimlight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dimlight/manifest.h"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <utility>

#include "dimlight/error.h"

namespace dimlight {

using nlohmann::json;

void ValidateId(std::string_view id, std::string_view what) {
  const bool bad = id.empty() || id == "." || id == ".." ||
                   id.find_first_of("/\\\n\r\t") != std::string_view::npos;
  if (bad) {
    throw Error(ErrorKind::kStructural,
                std::string(what) + " id '" + std::string(id) +
                    "' is empty or not usable as a directory name");
  }
}

DatasetManifest DatasetManifest::Parse(std::string_view jsonl,
                                       const std::filesystem::path& base_dir) {
  DatasetManifest manifest;
  std::set<std::pair<std::string, std::string>> seen;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  int line_no = 0;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "manifest line " + std::to_string(line_no);
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::kStructural, where + ": " + e.what());
    }
    ManifestEntry entry;
    try {
      entry.scene = row.at("scene").get<std::string>();
      entry.frame = row.at("frame").get<std::string>();
      entry.rgb = resolve(row.at("rgb").get<std::string>());
      if (row.contains("depth")) entry.depth = resolve(row["depth"].get<std::string>());
      if (row.contains("semantic")) {
        entry.semantic = resolve(row["semantic"].get<std::string>());
      }
      if (row.contains("overseg")) {
        entry.overseg = resolve(row["overseg"].get<std::string>());
      }
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kStructural, where + ": " + e.what());
    }
    ValidateId(entry.scene, "scene");
    ValidateId(entry.frame, "frame");
    if (!seen.emplace(entry.scene, entry.frame).second) {
      throw Error(ErrorKind::kStructural, where + ": duplicate frame '" +
                                              entry.frame + "' in scene '" +
                                              entry.scene + "'");
    }
    manifest.frames_.push_back(std::move(entry));
  }
  return manifest;
}

DatasetManifest DatasetManifest::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read manifest " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  DatasetManifest manifest = Parse(text.str(), path.parent_path());
  manifest.CheckAssetsExist();
  return manifest;
}

std::vector<std::string> DatasetManifest::scenes() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& f : frames_) {
    if (seen.insert(f.scene).second) out.push_back(f.scene);
  }
  return out;
}

void DatasetManifest::RequireAnnotations() const {
  for (const auto& f : frames_) {
    if (!f.has_annotations()) {
      throw Error(ErrorKind::kStructural,
                  "frame " + f.scene + "/" + f.frame +
                      " lacks depth/semantic/overseg assets");
    }
  }
}

void DatasetManifest::CheckAssetsExist() const {
  for (const auto& f : frames_) {
    for (const auto* p : {&f.rgb, f.depth ? &*f.depth : nullptr,
                          f.semantic ? &*f.semantic : nullptr,
                          f.overseg ? &*f.overseg : nullptr}) {
      if (p != nullptr && !std::filesystem::exists(*p)) {
        throw Error(ErrorKind::kIo, "asset for " + f.scene + "/" + f.frame +
                                        " does not exist: " + p->string());
      }
    }
  }
}

}  // namespace dimlight
