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

#ifndef DIMLIGHT_DEGRADE_H_
#define DIMLIGHT_DEGRADE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dimlight/camera.h"
#include "dimlight/color_space.h"
#include "dimlight/image.h"
#include "dimlight/isp.h"
#include "dimlight/manifest.h"
#include "dimlight/unprocess.h"

namespace dimlight {

// One rung of the L0..L5 ladder.
class DegradationLevel {
 public:
  static constexpr int kMaxIndex = 5;

  explicit DegradationLevel(int index);
  // Accepts "L3" or "l3".
  static DegradationLevel Parse(std::string_view name);
  // "L1..L5", "L0,L2", "L1-L3" and similar lists; result sorted, unique.
  static std::vector<DegradationLevel> ParseList(std::string_view spec);

  int index() const { return index_; }
  std::string name() const { return "L" + std::to_string(index_); }
  EvDrop ev() const;

  auto operator<=>(const DegradationLevel&) const = default;

 private:
  int index_;
};

// L0 -> 0, L1 -> 2, L2 -> 4, L3 -> 6, L4 -> 7.5, L5 -> 9 stops.
EvDrop LevelToEv(DegradationLevel level);

// Position of a level inside the K and r ranges when noise is tied to the
// ladder: L1..L5 -> 0.1, 0.3, 0.5, 0.7, 0.9.
double LadderQuantile(DegradationLevel level);

enum class Variant { kOriginal, kEvDrop, kNoisy };
std::string_view VariantName(Variant variant);
Variant ParseVariant(std::string_view name);

struct PipelineConfig {
  SamplingConfig sampling;
  UnprocessOptions unprocess;
  RenderOptions render;
  bool ladder_coupled = false;
};

struct SynthesisResult {
  SrgbImage noise_free;
  SrgbImage noisy;
  std::uint64_t frame_seed = 0;
  // Unset for L0, which has no noisy branch.
  std::optional<CameraParams> camera;
  std::optional<NoiseParams> noise;
};

// Both low-light variants of one image at one level. The noisy branch draws
// its parameters and noise from streams derived from
// (global_seed, scene, frame, level). L0 returns the input twice.
SynthesisResult SynthesizePair(const SrgbImage& image, DegradationLevel level,
                               std::uint64_t global_seed,
                               std::string_view scene, std::string_view frame,
                               const PipelineConfig& config);

struct FrameFailure {
  std::string scene;
  std::string frame;
  std::string message;
};

struct RunReport {
  std::size_t frames_processed = 0;
  std::size_t images_written = 0;
  std::vector<FrameFailure> failures;
  double wall_seconds = 0.0;

  nlohmann::json ToJson() const;
};

// {out}/{scene}/{frame}/{level}/{variant}.png
std::filesystem::path VariantPath(const std::filesystem::path& root,
                                  std::string_view scene,
                                  std::string_view frame,
                                  DegradationLevel level, Variant variant);

struct DatasetRunOptions {
  std::uint64_t global_seed = 0;
  int jobs = 1;
};

// Writes every requested variant plus a JSON sidecar next to each PNG.
// Per-frame failures are collected and the run continues; an unwritable
// out_dir throws kIo before any work starts.
RunReport ProcessDataset(const DatasetManifest& manifest,
                         const std::vector<DegradationLevel>& levels,
                         const std::filesystem::path& out_dir,
                         const PipelineConfig& config,
                         const DatasetRunOptions& options);

nlohmann::json CameraParamsToJson(const CameraParams& camera);
nlohmann::json NoiseParamsToJson(const NoiseParams& noise);

}  // namespace dimlight

#endif  // DIMLIGHT_DEGRADE_H_
