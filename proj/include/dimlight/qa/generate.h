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

#ifndef DIMLIGHT_QA_GENERATE_H_
#define DIMLIGHT_QA_GENERATE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dimlight/qa/stats.h"
#include "dimlight/qa/tables.h"

namespace dimlight::qa {

inline constexpr std::string_view kUnknownRoom = "unknown";
inline constexpr std::string_view kYes = "Yes";
inline constexpr std::string_view kNo = "No";

struct QaConfig {
  // Objects smaller than this fraction of the frame are never asked about.
  double min_area_fraction = 0.005;
  // Closest-object questions need the two nearest candidates to differ by
  // strictly more than this.
  double depth_gap_m = 0.5;
  // A color is ambiguous when the runner-up palette entry is no more than
  // (1 + ratio) times as far as the nearest one.
  double color_ambiguity_ratio = 0.10;
  int max_closest_choices = 6;
  int color_choices = 4;

  // kConfig on out-of-range values.
  void Validate() const;
};

struct QAPair {
  std::string scene;
  std::string frame;
  Family family = Family::kRoomType;
  std::string question;
  std::vector<std::string> choices;
  int answer_index = 0;
  // Rule id, thresholds, seed and the rule's chosen subject.
  nlohmann::json trace;

  const std::string& answer() const { return choices.at(answer_index); }
  nlohmann::json ToJson() const;
  // kStructural on missing fields or an out-of-range answer_index.
  static QAPair FromJson(const nlohmann::json& doc);

  bool operator==(const QAPair&) const = default;
};

struct ColorMatch {
  std::size_t index = 0;  // into QaTables::palette
  double distance = 0.0;
  double runner_up_distance = 0.0;
  bool ambiguous = false;
};

// Stage 2 of question generation: room classification, family survey and
// the five rules, all pure functions of FrameStatistics plus a seed.
class QaEngine {
 public:
  explicit QaEngine(QaTables tables = QaTables::Defaults(),
                    QaConfig config = {});

  const QaTables& tables() const { return tables_; }
  const QaConfig& config() const { return config_; }

  // Highest class-presence score; ties by room priority; "unknown" if no
  // room scores above zero.
  std::string ClassifyRoom(const FrameStatistics& stats) const;
  // Uses stats.room_type, so call after ClassifyRoom or Annotate.
  std::vector<Family> SurveyViableFamilies(const FrameStatistics& stats) const;
  // Fills room_type and viable_families.
  void Annotate(FrameStatistics& stats) const;

  // One question per viable family, in family order.
  std::vector<QAPair> Generate(FrameStatistics stats,
                               std::uint64_t global_seed) const;
  std::vector<QAPair> GenerateQa(const FrameBundle& frame,
                                 std::uint64_t global_seed,
                                 const StatsOptions& options = {}) const;

  // Re-derives the answer of `pair` from the statistics. Returns a reason on
  // any mismatch or ambiguity, nullopt when the pair is sound.
  std::optional<std::string> Verify(const QAPair& pair,
                                    const FrameStatistics& stats) const;

  bool PassesAreaFilter(const SegmentAttributes& segment) const;
  // Non-structural, non-flat, depth-valid, area-passing objects sorted by
  // (depth, segment id).
  std::vector<const SegmentAttributes*> ClosestCandidates(
      const FrameStatistics& stats) const;
  ColorMatch NameColor(const std::array<double, 3>& linear) const;

 private:
  const ClassInfo* ClassOf(const SegmentAttributes& segment) const;
  std::vector<const SegmentAttributes*> ObjectCandidates(
      const FrameStatistics& stats) const;
  std::vector<const SegmentAttributes*> ColorCandidates(
      const FrameStatistics& stats) const;
  std::vector<std::string> NegativeClasses(const FrameStatistics& stats) const;
  bool ClosestViable(const std::vector<const SegmentAttributes*>& c) const;

  QAPair RoomType(const FrameStatistics& stats, std::uint64_t seed) const;
  QAPair RoomAffordance(const FrameStatistics& stats, std::uint64_t seed) const;
  QAPair ObjectRecognition(const FrameStatistics& stats,
                           std::uint64_t seed) const;
  QAPair ObjectColor(const FrameStatistics& stats, std::uint64_t seed) const;
  QAPair ClosestObject(const FrameStatistics& stats, std::uint64_t seed) const;

  QaTables tables_;
  QaConfig config_;
};

// Seed of the stream that drives one (frame, family) question.
std::uint64_t QuestionSeed(std::uint64_t global_seed, std::string_view scene,
                           std::string_view frame, Family family);

}  // namespace dimlight::qa

#endif  // DIMLIGHT_QA_GENERATE_H_
