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

#ifndef DIMLIGHT_QA_STATS_H_
#define DIMLIGHT_QA_STATS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dimlight/image.h"
#include "dimlight/manifest.h"

namespace dimlight::qa {

// The five question families, numbered as in the generation trace.
enum class Family {
  kRoomType = 1,
  kRoomAffordance = 2,
  kObjectRecognition = 3,
  kObjectColor = 4,
  kClosestObject = 5,
};
inline constexpr std::array<Family, 5> kAllFamilies = {
    Family::kRoomType, Family::kRoomAffordance, Family::kObjectRecognition,
    Family::kObjectColor, Family::kClosestObject};

// "room_type", "room_affordance", "object_recognition", "object_color",
// "closest_object".
std::string_view FamilyName(Family family);
// Accepts the names above or the digits 1..5.
Family ParseFamily(std::string_view name);

// One annotated frame. Depth is in meters with 0 marking invalid pixels;
// semantic and overseg hold 16-bit ids, 0 meaning unlabeled.
struct FrameBundle {
  std::string scene;
  std::string frame;
  Rgb8Image rgb;
  Raster<double> depth_m;
  Raster<std::uint16_t> semantic;
  Raster<std::uint16_t> overseg;

  // kStructural unless all four rasters share one non-empty size.
  void Validate() const;
};

// Depth PNGs store 16-bit millimeters.
FrameBundle LoadFrameBundle(const ManifestEntry& entry);

struct BoundingBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;  // inclusive
  int y1 = 0;  // inclusive

  bool Contains(int x, int y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }
  bool operator==(const BoundingBox&) const = default;
};

struct SegmentAttributes {
  int segment_id = 0;
  // Majority nonzero semantic id inside the mask; ties go to the lower id.
  int class_id = 0;
  // Mean of gamma-2.2-decoded RGB over the mask.
  std::array<double, 3> mean_color{};
  // Median over valid pixels, set only when valid_fraction reaches the
  // extraction threshold.
  std::optional<double> depth_median_m;
  double depth_valid_fraction = 0.0;
  std::size_t area_pixels = 0;
  double area_fraction = 0.0;
  BoundingBox bbox;

  bool operator==(const SegmentAttributes&) const = default;
};

struct FrameStatistics {
  std::string scene;
  std::string frame;
  int width = 0;
  int height = 0;
  // Ordered by segment_id.
  std::vector<SegmentAttributes> segments;
  // Filled by QaEngine::Annotate; empty after extraction.
  std::string room_type;
  std::vector<Family> viable_families;

  bool operator==(const FrameStatistics&) const = default;
};

struct StatsOptions {
  double min_valid_depth_fraction = 0.5;
};

// One entry per overseg id > 0 whose mask holds at least one labeled pixel.
// Throws kStructural on mismatched rasters.
FrameStatistics ExtractSegmentStats(const FrameBundle& frame,
                                    const StatsOptions& options = {});

// Stage-1 cache format. StatsFromJson rejects other schema versions with
// kStructural; doubles round-trip exactly.
inline constexpr std::string_view kStatsSchema = "dimlight.frame_stats/1";
nlohmann::json StatsToJson(const FrameStatistics& stats,
                           const StatsOptions& options);
FrameStatistics StatsFromJson(const nlohmann::json& doc);

}  // namespace dimlight::qa

#endif  // DIMLIGHT_QA_STATS_H_
