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

#ifndef DIMLIGHT_MANIFEST_H_
#define DIMLIGHT_MANIFEST_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dimlight {

struct ManifestEntry {
  std::string scene;
  std::string frame;
  std::filesystem::path rgb;
  std::optional<std::filesystem::path> depth;
  std::optional<std::filesystem::path> semantic;
  std::optional<std::filesystem::path> overseg;

  bool has_annotations() const { return depth && semantic && overseg; }
};

// JSON Lines, one frame per line:
//   {"scene": "...", "frame": "...", "rgb": "...", "depth": "...",
//    "semantic": "...", "overseg": "..."}
// Relative asset paths resolve against the manifest's directory.
class DatasetManifest {
 public:
  static DatasetManifest Parse(std::string_view jsonl,
                               const std::filesystem::path& base_dir);
  // Also checks that every referenced asset exists.
  static DatasetManifest Load(const std::filesystem::path& path);

  const std::vector<ManifestEntry>& frames() const { return frames_; }
  std::vector<std::string> scenes() const;

  // Throws kStructural unless every frame lists depth, semantic and overseg.
  void RequireAnnotations() const;
  void CheckAssetsExist() const;

 private:
  std::vector<ManifestEntry> frames_;
};

// Scene and frame ids become directory names; reject anything unsafe.
void ValidateId(std::string_view id, std::string_view what);

}  // namespace dimlight

#endif  // DIMLIGHT_MANIFEST_H_
