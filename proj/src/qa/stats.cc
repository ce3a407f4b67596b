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

#include "dimlight/qa/stats.h"

#include <algorithm>
#include <map>

#include "dimlight/color_space.h"
#include "dimlight/error.h"
#include "dimlight/png_io.h"

namespace dimlight::qa {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 5> kFamilyNames = {
    "room_type", "room_affordance", "object_recognition", "object_color",
    "closest_object"};

struct Accumulator {
  std::size_t pixels = 0;
  std::array<double, 3> color_sum{};
  std::vector<double> depths;
  std::map<int, std::size_t> class_votes;
  BoundingBox bbox{.x0 = 1 << 30, .y0 = 1 << 30, .x1 = -1, .y1 = -1};
};

double Median(std::vector<double>& values) {
  const std::size_t n = values.size();
  auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

void RequireSize(int w, int h, int width, int height, std::string_view what) {
  if (w != width || h != height) {
    throw Error(ErrorKind::kStructural,
                std::string(what) + " raster is " + std::to_string(w) + "x" +
                    std::to_string(h) + ", expected " + std::to_string(width) +
                    "x" + std::to_string(height));
  }
}

template <typename T>
const T& Field(const json& doc, std::string_view key) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw Error(ErrorKind::kStructural,
                "frame stats missing '" + std::string(key) + "'");
  }
  return it->template get_ref<const T&>();
}

}  // namespace

std::string_view FamilyName(Family family) {
  return kFamilyNames[static_cast<int>(family) - 1];
}

Family ParseFamily(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (name == FamilyName(f) ||
        (name.size() == 1 && name[0] - '0' == static_cast<int>(f))) {
      return f;
    }
  }
  throw Error(ErrorKind::kConfig,
              "unknown question family '" + std::string(name) + "'");
}

void FrameBundle::Validate() const {
  if (rgb.width <= 0 || rgb.height <= 0) {
    throw Error(ErrorKind::kStructural, "frame has an empty RGB raster");
  }
  RequireSize(depth_m.width, depth_m.height, rgb.width, rgb.height, "depth");
  RequireSize(semantic.width, semantic.height, rgb.width, rgb.height,
              "semantic");
  RequireSize(overseg.width, overseg.height, rgb.width, rgb.height, "overseg");
}

FrameBundle LoadFrameBundle(const ManifestEntry& entry) {
  if (!entry.has_annotations()) {
    throw Error(ErrorKind::kStructural, "frame " + entry.scene + "/" +
                                            entry.frame +
                                            " lacks depth/semantic/overseg");
  }
  FrameBundle bundle;
  bundle.scene = entry.scene;
  bundle.frame = entry.frame;
  bundle.rgb = ReadRgb8Png(entry.rgb);
  const Raster<std::uint16_t> depth_mm = ReadGray16Png(*entry.depth);
  bundle.depth_m = Raster<double>(depth_mm.width, depth_mm.height);
  for (std::size_t i = 0; i < depth_mm.data.size(); ++i) {
    bundle.depth_m.data[i] = depth_mm.data[i] / 1000.0;
  }
  bundle.semantic = ReadGray16Png(*entry.semantic);
  bundle.overseg = ReadGray16Png(*entry.overseg);
  bundle.Validate();
  return bundle;
}

FrameStatistics ExtractSegmentStats(const FrameBundle& frame,
                                    const StatsOptions& options) {
  frame.Validate();
  std::array<double, 256> decode{};
  for (int v = 0; v < 256; ++v) decode[v] = DecodeGamma(v / 255.0);

  std::map<int, Accumulator> segments;
  for (int y = 0; y < frame.rgb.height; ++y) {
    for (int x = 0; x < frame.rgb.width; ++x) {
      const int id = frame.overseg.at(x, y);
      if (id == 0) continue;
      Accumulator& acc = segments[id];
      ++acc.pixels;
      for (int c = 0; c < 3; ++c) acc.color_sum[c] += decode[frame.rgb.at(x, y, c)];
      const double depth = frame.depth_m.at(x, y);
      if (depth > 0.0) acc.depths.push_back(depth);
      const int label = frame.semantic.at(x, y);
      if (label != 0) ++acc.class_votes[label];
      acc.bbox.x0 = std::min(acc.bbox.x0, x);
      acc.bbox.y0 = std::min(acc.bbox.y0, y);
      acc.bbox.x1 = std::max(acc.bbox.x1, x);
      acc.bbox.y1 = std::max(acc.bbox.y1, y);
    }
  }

  FrameStatistics stats;
  stats.scene = frame.scene;
  stats.frame = frame.frame;
  stats.width = frame.rgb.width;
  stats.height = frame.rgb.height;
  const double frame_pixels =
      static_cast<double>(frame.rgb.width) * frame.rgb.height;
  for (auto& [id, acc] : segments) {
    if (acc.class_votes.empty()) continue;
    SegmentAttributes seg;
    seg.segment_id = id;
    // std::map iterates ids ascending, so strict > keeps the lower id on ties.
    std::size_t best = 0;
    for (const auto& [label, votes] : acc.class_votes) {
      if (votes > best) {
        best = votes;
        seg.class_id = label;
      }
    }
    for (int c = 0; c < 3; ++c) seg.mean_color[c] = acc.color_sum[c] / acc.pixels;
    seg.depth_valid_fraction =
        static_cast<double>(acc.depths.size()) / acc.pixels;
    if (!acc.depths.empty() &&
        seg.depth_valid_fraction >= options.min_valid_depth_fraction) {
      seg.depth_median_m = Median(acc.depths);
    }
    seg.area_pixels = acc.pixels;
    seg.area_fraction = acc.pixels / frame_pixels;
    seg.bbox = acc.bbox;
    stats.segments.push_back(seg);
  }
  return stats;
}

json StatsToJson(const FrameStatistics& stats, const StatsOptions& options) {
  json segments = json::array();
  for (const SegmentAttributes& s : stats.segments) {
    segments.push_back({
        {"id", s.segment_id},
        {"class_id", s.class_id},
        {"mean_color", s.mean_color},
        {"depth_median_m",
         s.depth_median_m ? json(*s.depth_median_m) : json(nullptr)},
        {"depth_valid_fraction", s.depth_valid_fraction},
        {"area_pixels", s.area_pixels},
        {"area_fraction", s.area_fraction},
        {"bbox", {s.bbox.x0, s.bbox.y0, s.bbox.x1, s.bbox.y1}},
    });
  }
  return {
      {"schema", kStatsSchema},
      {"scene", stats.scene},
      {"frame", stats.frame},
      {"width", stats.width},
      {"height", stats.height},
      {"min_valid_depth_fraction", options.min_valid_depth_fraction},
      {"segments", std::move(segments)},
  };
}

FrameStatistics StatsFromJson(const json& doc) {
  try {
    if (!doc.is_object() ||
        Field<std::string>(doc, "schema") != std::string(kStatsSchema)) {
      throw Error(ErrorKind::kStructural,
                  "frame stats schema is not " + std::string(kStatsSchema));
    }
    FrameStatistics stats;
    stats.scene = Field<std::string>(doc, "scene");
    stats.frame = Field<std::string>(doc, "frame");
    stats.width = doc.at("width").get<int>();
    stats.height = doc.at("height").get<int>();
    for (const json& s : doc.at("segments")) {
      SegmentAttributes seg;
      seg.segment_id = s.at("id").get<int>();
      seg.class_id = s.at("class_id").get<int>();
      seg.mean_color = s.at("mean_color").get<std::array<double, 3>>();
      if (!s.at("depth_median_m").is_null()) {
        seg.depth_median_m = s.at("depth_median_m").get<double>();
      }
      seg.depth_valid_fraction = s.at("depth_valid_fraction").get<double>();
      seg.area_pixels = s.at("area_pixels").get<std::size_t>();
      seg.area_fraction = s.at("area_fraction").get<double>();
      const auto box = s.at("bbox").get<std::array<int, 4>>();
      seg.bbox = {box[0], box[1], box[2], box[3]};
      stats.segments.push_back(seg);
    }
    return stats;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kStructural,
                std::string("malformed frame stats: ") + e.what());
  }
}

}  // namespace dimlight::qa
