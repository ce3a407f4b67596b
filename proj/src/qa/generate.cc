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

#include "dimlight/qa/generate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <boost/random/uniform_int_distribution.hpp>

#include "dimlight/error.h"
#include "dimlight/seed.h"

namespace dimlight::qa {

using nlohmann::json;

namespace {

constexpr int kRuleVersion = 1;

std::size_t UniformIndex(RandomStream& rng, std::size_t size) {
  return boost::random::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

bool Coin(RandomStream& rng) { return UniformIndex(rng, 2) == 0; }

// Fisher-Yates on top of Boost's portable integer distribution; std::shuffle
// is implementation-defined.
template <typename T>
void Shuffle(std::vector<T>& items, RandomStream& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[UniformIndex(rng, i)]);
  }
}

double Distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) sum += (a[c] - b[c]) * (a[c] - b[c]);
  return std::sqrt(sum);
}

// Shuffles choices and points answer_index back at `answer`.
void FinishChoices(QAPair& pair, std::vector<std::string> choices,
                   const std::string& answer, RandomStream& rng) {
  Shuffle(choices, rng);
  pair.answer_index = static_cast<int>(
      std::find(choices.begin(), choices.end(), answer) - choices.begin());
  pair.choices = std::move(choices);
}

QAPair StartPair(const FrameStatistics& stats, Family family,
                 std::uint64_t seed) {
  QAPair pair;
  pair.scene = stats.scene;
  pair.frame = stats.frame;
  pair.family = family;
  pair.trace = {{"rule", std::string(FamilyName(family))},
                {"rule_version", kRuleVersion},
                {"seed", seed}};
  return pair;
}

template <typename T>
std::optional<T> TraceValue(const json& trace, std::string_view key) {
  auto it = trace.find(key);
  if (it == trace.end()) return std::nullopt;
  try {
    return it->template get<T>();
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

}  // namespace

void QaConfig::Validate() const {
  if (!(min_area_fraction >= 0.0 && min_area_fraction < 1.0)) {
    throw Error(ErrorKind::kConfig, "min_area_fraction must be in [0, 1)");
  }
  if (!(depth_gap_m >= 0.0) || !std::isfinite(depth_gap_m)) {
    throw Error(ErrorKind::kConfig, "depth_gap_m must be finite and >= 0");
  }
  if (!(color_ambiguity_ratio >= 0.0) || !std::isfinite(color_ambiguity_ratio)) {
    throw Error(ErrorKind::kConfig,
                "color_ambiguity_ratio must be finite and >= 0");
  }
  if (max_closest_choices < 2 || max_closest_choices > 6) {
    throw Error(ErrorKind::kConfig, "max_closest_choices must be in [2, 6]");
  }
  if (color_choices < 2 || color_choices > 6) {
    throw Error(ErrorKind::kConfig, "color_choices must be in [2, 6]");
  }
}

json QAPair::ToJson() const {
  return {{"scene", scene},
          {"frame", frame},
          {"family", std::string(FamilyName(family))},
          {"question", question},
          {"choices", choices},
          {"answer_index", answer_index},
          {"trace", trace}};
}

QAPair QAPair::FromJson(const json& doc) {
  QAPair pair;
  try {
    pair.scene = doc.at("scene").get<std::string>();
    pair.frame = doc.at("frame").get<std::string>();
    pair.family = ParseFamily(doc.at("family").get<std::string>());
    pair.question = doc.at("question").get<std::string>();
    pair.choices = doc.at("choices").get<std::vector<std::string>>();
    pair.answer_index = doc.at("answer_index").get<int>();
    pair.trace = doc.value("trace", json::object());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kStructural,
                std::string("malformed QA record: ") + e.what());
  }
  if (pair.choices.size() < 2 || pair.answer_index < 0 ||
      pair.answer_index >= static_cast<int>(pair.choices.size())) {
    throw Error(ErrorKind::kStructural, "QA record " + pair.scene + "/" +
                                            pair.frame +
                                            " has an invalid answer_index");
  }
  return pair;
}

std::uint64_t QuestionSeed(std::uint64_t global_seed, std::string_view scene,
                           std::string_view frame, Family family) {
  return SeedHasher()
      .Add(global_seed)
      .Add("qa")
      .Add(scene)
      .Add(frame)
      .Add(FamilyName(family))
      .Finish();
}

QaEngine::QaEngine(QaTables tables, QaConfig config)
    : tables_(std::move(tables)), config_(config) {
  config_.Validate();
  if (static_cast<int>(tables_.palette.size()) < config_.color_choices) {
    throw Error(ErrorKind::kConfig,
                "palette has fewer colors than color_choices");
  }
}

const ClassInfo* QaEngine::ClassOf(const SegmentAttributes& segment) const {
  return tables_.vocabulary.Find(segment.class_id);
}

bool QaEngine::PassesAreaFilter(const SegmentAttributes& segment) const {
  return segment.area_fraction >= config_.min_area_fraction;
}

std::string QaEngine::ClassifyRoom(const FrameStatistics& stats) const {
  std::set<std::string> present;
  for (const SegmentAttributes& s : stats.segments) {
    if (const ClassInfo* info = ClassOf(s)) present.insert(info->name);
  }
  std::string best(kUnknownRoom);
  double best_score = 0.0;
  for (const std::string& room : tables_.rooms.priority) {
    auto it = tables_.rooms.weights.find(room);
    if (it == tables_.rooms.weights.end()) continue;
    double score = 0.0;
    for (const auto& [name, weight] : it->second) {
      if (present.contains(name)) score += weight;
    }
    if (score > best_score) {
      best_score = score;
      best = room;
    }
  }
  return best;
}

std::vector<const SegmentAttributes*> QaEngine::ObjectCandidates(
    const FrameStatistics& stats) const {
  std::vector<const SegmentAttributes*> out;
  for (const SegmentAttributes& s : stats.segments) {
    const ClassInfo* info = ClassOf(s);
    if (info != nullptr && !info->structural && PassesAreaFilter(s)) {
      out.push_back(&s);
    }
  }
  return out;
}

std::vector<std::string> QaEngine::NegativeClasses(
    const FrameStatistics& stats) const {
  std::set<int> present;
  for (const SegmentAttributes& s : stats.segments) present.insert(s.class_id);
  std::vector<std::string> out;
  for (const ClassInfo& c : tables_.vocabulary.classes()) {
    if (!c.structural && !present.contains(c.id)) out.push_back(c.name);
  }
  return out;
}

ColorMatch QaEngine::NameColor(const std::array<double, 3>& linear) const {
  ColorMatch match;
  match.distance = std::numeric_limits<double>::infinity();
  match.runner_up_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tables_.palette.size(); ++i) {
    const double d = Distance(linear, tables_.palette[i].linear);
    if (d < match.distance) {
      match.runner_up_distance = match.distance;
      match.distance = d;
      match.index = i;
    } else if (d < match.runner_up_distance) {
      match.runner_up_distance = d;
    }
  }
  match.ambiguous = match.runner_up_distance <=
                    (1.0 + config_.color_ambiguity_ratio) * match.distance;
  return match;
}

std::vector<const SegmentAttributes*> QaEngine::ColorCandidates(
    const FrameStatistics& stats) const {
  std::map<int, int> class_count;
  for (const SegmentAttributes& s : stats.segments) ++class_count[s.class_id];
  std::vector<const SegmentAttributes*> out;
  for (const SegmentAttributes* s : ObjectCandidates(stats)) {
    if (class_count[s->class_id] == 1 && !NameColor(s->mean_color).ambiguous) {
      out.push_back(s);
    }
  }
  return out;
}

std::vector<const SegmentAttributes*> QaEngine::ClosestCandidates(
    const FrameStatistics& stats) const {
  std::vector<const SegmentAttributes*> out;
  for (const SegmentAttributes* s : ObjectCandidates(stats)) {
    if (!ClassOf(*s)->flat && s->depth_median_m) out.push_back(s);
  }
  std::sort(out.begin(), out.end(),
            [](const SegmentAttributes* a, const SegmentAttributes* b) {
              if (*a->depth_median_m != *b->depth_median_m) {
                return *a->depth_median_m < *b->depth_median_m;
              }
              return a->segment_id < b->segment_id;
            });
  return out;
}

bool QaEngine::ClosestViable(
    const std::vector<const SegmentAttributes*>& c) const {
  if (c.size() < 2) return false;
  std::set<int> classes;
  for (const SegmentAttributes* s : c) classes.insert(s->class_id);
  return classes.size() >= 2 &&
         *c[1]->depth_median_m - *c[0]->depth_median_m > config_.depth_gap_m;
}

std::vector<Family> QaEngine::SurveyViableFamilies(
    const FrameStatistics& stats) const {
  std::vector<Family> out;
  const bool room_known =
      !stats.room_type.empty() && stats.room_type != kUnknownRoom;
  if (room_known) {
    out.push_back(Family::kRoomType);
    out.push_back(Family::kRoomAffordance);
  }
  if (!ObjectCandidates(stats).empty()) out.push_back(Family::kObjectRecognition);
  if (!ColorCandidates(stats).empty()) out.push_back(Family::kObjectColor);
  if (ClosestViable(ClosestCandidates(stats))) {
    out.push_back(Family::kClosestObject);
  }
  return out;
}

void QaEngine::Annotate(FrameStatistics& stats) const {
  stats.room_type = ClassifyRoom(stats);
  stats.viable_families = SurveyViableFamilies(stats);
}

QAPair QaEngine::RoomType(const FrameStatistics& stats,
                          std::uint64_t seed) const {
  RandomStream rng(seed);
  QAPair pair = StartPair(stats, Family::kRoomType, seed);
  pair.question = "What type of room is this?";
  pair.trace["room"] = stats.room_type;
  FinishChoices(pair, tables_.rooms.priority, stats.room_type, rng);
  return pair;
}

QAPair QaEngine::RoomAffordance(const FrameStatistics& stats,
                                std::uint64_t seed) const {
  RandomStream rng(seed);
  QAPair pair = StartPair(stats, Family::kRoomAffordance, seed);
  std::vector<const Affordance*> suited;
  std::vector<const Affordance*> unsuited;
  for (const Affordance& a : tables_.affordances) {
    const bool fits = std::find(a.rooms.begin(), a.rooms.end(),
                                stats.room_type) != a.rooms.end();
    (fits ? suited : unsuited).push_back(&a);
  }
  bool positive = Coin(rng);
  if (positive && suited.empty()) positive = false;
  if (!positive && unsuited.empty()) positive = true;
  const auto& pool = positive ? suited : unsuited;
  const Affordance& chosen = *pool[UniformIndex(rng, pool.size())];
  pair.question =
      "I want to " + chosen.activity + ". Is this room suitable for this?";
  pair.trace["room"] = stats.room_type;
  pair.trace["activity"] = chosen.activity;
  FinishChoices(pair, {std::string(kYes), std::string(kNo)},
                std::string(positive ? kYes : kNo), rng);
  return pair;
}

QAPair QaEngine::ObjectRecognition(const FrameStatistics& stats,
                                   std::uint64_t seed) const {
  RandomStream rng(seed);
  QAPair pair = StartPair(stats, Family::kObjectRecognition, seed);
  std::set<int> present_ids;
  for (const SegmentAttributes* s : ObjectCandidates(stats)) {
    present_ids.insert(s->class_id);
  }
  std::vector<std::string> present;
  for (int id : present_ids) present.push_back(tables_.vocabulary.Find(id)->name);
  const std::vector<std::string> absent = NegativeClasses(stats);
  bool positive = Coin(rng);
  if (absent.empty()) positive = true;
  const auto& pool = positive ? present : absent;
  const std::string& name = pool[UniformIndex(rng, pool.size())];
  pair.question = "Is there a " + name + " in the scene?";
  pair.trace["class"] = name;
  pair.trace["min_area_fraction"] = config_.min_area_fraction;
  FinishChoices(pair, {std::string(kYes), std::string(kNo)},
                std::string(positive ? kYes : kNo), rng);
  return pair;
}

QAPair QaEngine::ObjectColor(const FrameStatistics& stats,
                             std::uint64_t seed) const {
  RandomStream rng(seed);
  QAPair pair = StartPair(stats, Family::kObjectColor, seed);
  const auto candidates = ColorCandidates(stats);
  // The largest unambiguous instance is the most legible subject.
  const SegmentAttributes* subject = *std::min_element(
      candidates.begin(), candidates.end(),
      [](const SegmentAttributes* a, const SegmentAttributes* b) {
        if (a->area_pixels != b->area_pixels) {
          return a->area_pixels > b->area_pixels;
        }
        return a->segment_id < b->segment_id;
      });
  const std::string& name = ClassOf(*subject)->name;
  const ColorMatch match = NameColor(subject->mean_color);
  const std::string& answer = tables_.palette[match.index].name;

  std::vector<std::string> others;
  for (const PaletteColor& c : tables_.palette) {
    if (c.name != answer) others.push_back(c.name);
  }
  Shuffle(others, rng);
  others.resize(config_.color_choices - 1);
  others.push_back(answer);

  pair.question = "What color is the " + name + " in the scene?";
  pair.trace["class"] = name;
  pair.trace["segment_id"] = subject->segment_id;
  pair.trace["min_area_fraction"] = config_.min_area_fraction;
  pair.trace["color_ambiguity_ratio"] = config_.color_ambiguity_ratio;
  pair.trace["color_distance"] = match.distance;
  pair.trace["runner_up_distance"] = match.runner_up_distance;
  FinishChoices(pair, std::move(others), answer, rng);
  return pair;
}

QAPair QaEngine::ClosestObject(const FrameStatistics& stats,
                               std::uint64_t seed) const {
  RandomStream rng(seed);
  QAPair pair = StartPair(stats, Family::kClosestObject, seed);
  const auto candidates = ClosestCandidates(stats);
  std::vector<std::string> classes;
  for (const SegmentAttributes* s : candidates) {
    const std::string& name = ClassOf(*s)->name;
    if (std::find(classes.begin(), classes.end(), name) == classes.end()) {
      classes.push_back(name);
    }
  }
  // Nearest classes first, so the cap drops the farthest ones.
  if (static_cast<int>(classes.size()) > config_.max_closest_choices) {
    classes.resize(config_.max_closest_choices);
  }
  const std::string answer = classes.front();
  pair.question = "Which of these objects is closest to the camera?";
  pair.trace["segment_id"] = candidates[0]->segment_id;
  pair.trace["closest_depth_m"] = *candidates[0]->depth_median_m;
  pair.trace["runner_up_depth_m"] = *candidates[1]->depth_median_m;
  pair.trace["depth_gap_m"] = config_.depth_gap_m;
  pair.trace["min_area_fraction"] = config_.min_area_fraction;
  FinishChoices(pair, std::move(classes), answer, rng);
  return pair;
}

std::vector<QAPair> QaEngine::Generate(FrameStatistics stats,
                                       std::uint64_t global_seed) const {
  Annotate(stats);
  std::vector<QAPair> out;
  for (Family family : stats.viable_families) {
    const std::uint64_t seed =
        QuestionSeed(global_seed, stats.scene, stats.frame, family);
    switch (family) {
      case Family::kRoomType:
        out.push_back(RoomType(stats, seed));
        break;
      case Family::kRoomAffordance:
        out.push_back(RoomAffordance(stats, seed));
        break;
      case Family::kObjectRecognition:
        out.push_back(ObjectRecognition(stats, seed));
        break;
      case Family::kObjectColor:
        out.push_back(ObjectColor(stats, seed));
        break;
      case Family::kClosestObject:
        out.push_back(ClosestObject(stats, seed));
        break;
    }
  }
  return out;
}

std::vector<QAPair> QaEngine::GenerateQa(const FrameBundle& frame,
                                         std::uint64_t global_seed,
                                         const StatsOptions& options) const {
  return Generate(ExtractSegmentStats(frame, options), global_seed);
}

std::optional<std::string> QaEngine::Verify(
    const QAPair& pair, const FrameStatistics& stats) const {
  const auto& choices = pair.choices;
  if (choices.size() < 2 || choices.size() > 6) return "choice count not in [2, 6]";
  if (pair.answer_index < 0 ||
      pair.answer_index >= static_cast<int>(choices.size())) {
    return "answer_index out of range";
  }
  if (std::set<std::string>(choices.begin(), choices.end()).size() !=
      choices.size()) {
    return "duplicate choices";
  }
  const std::string& answer = pair.answer();
  const auto same_set = [&](std::vector<std::string> expected) {
    std::vector<std::string> got = choices;
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    return got == expected;
  };
  const std::vector<std::string> yes_no = {std::string(kYes), std::string(kNo)};
  const std::string room = ClassifyRoom(stats);

  switch (pair.family) {
    case Family::kRoomType: {
      if (room == kUnknownRoom) return "room is unknown";
      if (!same_set(tables_.rooms.priority)) return "choices are not the room list";
      if (answer != room) return "answer '" + answer + "' but room is " + room;
      return std::nullopt;
    }
    case Family::kRoomAffordance: {
      if (room == kUnknownRoom) return "room is unknown";
      if (!same_set(yes_no)) return "choices are not Yes/No";
      const auto activity = TraceValue<std::string>(pair.trace, "activity");
      const Affordance* entry = nullptr;
      for (const Affordance& a : tables_.affordances) {
        if (activity && a.activity == *activity) entry = &a;
      }
      if (entry == nullptr) return "trace activity not in the table";
      const bool fits = std::find(entry->rooms.begin(), entry->rooms.end(),
                                  room) != entry->rooms.end();
      if (answer != (fits ? kYes : kNo)) return "affordance answer mismatch";
      return std::nullopt;
    }
    case Family::kObjectRecognition: {
      if (!same_set(yes_no)) return "choices are not Yes/No";
      const auto name = TraceValue<std::string>(pair.trace, "class");
      const ClassInfo* info =
          name ? tables_.vocabulary.FindByName(*name) : nullptr;
      if (info == nullptr || info->structural) return "trace class invalid";
      bool any = false;
      bool legible = false;
      for (const SegmentAttributes& s : stats.segments) {
        if (s.class_id != info->id) continue;
        any = true;
        legible = legible || PassesAreaFilter(s);
      }
      if (answer == kYes && !legible) return "positive class not legible";
      if (answer == kNo && any) return "negative class is present";
      return std::nullopt;
    }
    case Family::kObjectColor: {
      const auto id = TraceValue<int>(pair.trace, "segment_id");
      const SegmentAttributes* subject = nullptr;
      int same_class = 0;
      for (const SegmentAttributes& s : stats.segments) {
        if (id && s.segment_id == *id) subject = &s;
      }
      if (subject == nullptr) return "trace segment missing";
      for (const SegmentAttributes& s : stats.segments) {
        same_class += s.class_id == subject->class_id;
      }
      const ClassInfo* info = ClassOf(*subject);
      if (info == nullptr || info->structural) return "subject is not an object";
      if (same_class != 1) return "subject class is not unique";
      if (!PassesAreaFilter(*subject)) return "subject below area filter";
      if (pair.question.find(info->name) == std::string::npos) {
        return "question does not name the subject";
      }
      const ColorMatch match = NameColor(subject->mean_color);
      if (match.ambiguous) return "subject color is ambiguous";
      if (answer != tables_.palette[match.index].name) return "color mismatch";
      for (const std::string& c : choices) {
        const bool known = std::any_of(
            tables_.palette.begin(), tables_.palette.end(),
            [&](const PaletteColor& p) { return p.name == c; });
        if (!known) return "choice '" + c + "' not in palette";
      }
      return std::nullopt;
    }
    case Family::kClosestObject: {
      const auto candidates = ClosestCandidates(stats);
      if (!ClosestViable(candidates)) return "closest-object preconditions fail";
      if (answer != ClassOf(*candidates[0])->name) return "closest mismatch";
      for (const std::string& c : choices) {
        const bool valid = std::any_of(
            candidates.begin(), candidates.end(),
            [&](const SegmentAttributes* s) { return ClassOf(*s)->name == c; });
        if (!valid) return "choice '" + c + "' is not a valid object";
      }
      return std::nullopt;
    }
  }
  return "unknown family";
}

}  // namespace dimlight::qa
