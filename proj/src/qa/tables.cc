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

#include "dimlight/qa/tables.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "dimlight/color_space.h"
#include "dimlight/error.h"

namespace dimlight::qa {

namespace {

#include "qa/default_tables.inc"

[[noreturn]] void Fail(std::string_view table, const std::string& message) {
  throw Error(ErrorKind::kConfig,
              std::string(table) + " table: " + message);
}

toml::table ParseToml(std::string_view text, std::string_view table) {
  try {
    return toml::parse(text, table);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " at line " << e.source().begin.line;
    Fail(table, msg.str());
  }
}

const toml::array& RequireArray(const toml::table& root, std::string_view key,
                                std::string_view table) {
  const toml::array* array = root[key].as_array();
  if (array == nullptr) Fail(table, "missing array '" + std::string(key) + "'");
  return *array;
}

std::string RequireString(const toml::table& entry, std::string_view key,
                          std::string_view table) {
  std::optional<std::string> value = entry[key].value<std::string>();
  if (!value || value->empty()) {
    Fail(table, "entry needs a non-empty string '" + std::string(key) + "'");
  }
  return *value;
}

double RequireNumber(const toml::node& node, std::string_view what,
                     std::string_view table) {
  if (const auto* i = node.as_integer()) return static_cast<double>(i->get());
  if (const auto* f = node.as_floating_point()) return f->get();
  Fail(table, std::string(what) + " must be a number");
}

std::vector<ClassInfo> ParseVocabulary(std::string_view text) {
  constexpr std::string_view kTable = "vocabulary";
  const toml::table root = ParseToml(text, kTable);
  std::vector<ClassInfo> classes;
  for (const toml::node& node : RequireArray(root, "classes", kTable)) {
    const toml::table* entry = node.as_table();
    if (entry == nullptr) Fail(kTable, "every class must be a table");
    ClassInfo info;
    const std::optional<std::int64_t> id = (*entry)["id"].value<std::int64_t>();
    if (!id || *id <= 0 || *id > 65535) {
      Fail(kTable, "class ids must be integers in [1, 65535]");
    }
    info.id = static_cast<int>(*id);
    info.name = RequireString(*entry, "name", kTable);
    info.structural = (*entry)["structural"].value_or(false);
    info.flat = (*entry)["flat"].value_or(false);
    classes.push_back(std::move(info));
  }
  return classes;
}

RoomRules ParseRooms(std::string_view text) {
  constexpr std::string_view kTable = "rooms";
  const toml::table root = ParseToml(text, kTable);
  RoomRules rules;
  for (const toml::node& node : RequireArray(root, "priority", kTable)) {
    std::optional<std::string> name = node.value<std::string>();
    if (!name || name->empty()) Fail(kTable, "priority entries must be names");
    rules.priority.push_back(*name);
  }
  const toml::table* weights = root["weights"].as_table();
  if (weights == nullptr) Fail(kTable, "missing [weights]");
  for (const auto& [room, node] : *weights) {
    const toml::table* classes = node.as_table();
    if (classes == nullptr) {
      Fail(kTable, "weights." + std::string(room.str()) + " must be a table");
    }
    auto& row = rules.weights[std::string(room.str())];
    for (const auto& [name, weight] : *classes) {
      const double w = RequireNumber(weight, "weight", kTable);
      if (!(w > 0.0)) Fail(kTable, "weights must be > 0");
      row[std::string(name.str())] = w;
    }
  }
  return rules;
}

std::vector<Affordance> ParseAffordances(std::string_view text) {
  constexpr std::string_view kTable = "affordances";
  const toml::table root = ParseToml(text, kTable);
  std::vector<Affordance> out;
  for (const toml::node& node : RequireArray(root, "activities", kTable)) {
    const toml::table* entry = node.as_table();
    if (entry == nullptr) Fail(kTable, "every activity must be a table");
    Affordance a;
    a.activity = RequireString(*entry, "activity", kTable);
    const toml::array* rooms = (*entry)["rooms"].as_array();
    if (rooms == nullptr || rooms->empty()) {
      Fail(kTable, "activity '" + a.activity + "' needs a non-empty rooms list");
    }
    for (const toml::node& room : *rooms) {
      std::optional<std::string> name = room.value<std::string>();
      if (!name) Fail(kTable, "room names must be strings");
      a.rooms.push_back(*name);
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<PaletteColor> ParsePalette(std::string_view text) {
  constexpr std::string_view kTable = "palette";
  const toml::table root = ParseToml(text, kTable);
  std::vector<PaletteColor> out;
  for (const toml::node& node : RequireArray(root, "colors", kTable)) {
    const toml::table* entry = node.as_table();
    if (entry == nullptr) Fail(kTable, "every color must be a table");
    PaletteColor color;
    color.name = RequireString(*entry, "name", kTable);
    const toml::array* srgb = (*entry)["srgb"].as_array();
    if (srgb == nullptr || srgb->size() != 3) {
      Fail(kTable, "color '" + color.name + "' needs srgb = [r, g, b]");
    }
    for (std::size_t c = 0; c < 3; ++c) {
      const std::optional<std::int64_t> v = (*srgb)[c].value<std::int64_t>();
      if (!v || *v < 0 || *v > 255) {
        Fail(kTable, "srgb components must be integers in [0, 255]");
      }
      color.srgb[c] = static_cast<std::uint8_t>(*v);
      color.linear[c] = DecodeGamma(*v / 255.0);
    }
    out.push_back(std::move(color));
  }
  return out;
}

void CrossValidate(const QaTables& t) {
  const auto& priority = t.rooms.priority;
  const std::set<std::string> rooms(priority.begin(), priority.end());
  if (rooms.size() != priority.size() || priority.size() < 2 ||
      priority.size() > 6) {
    Fail("rooms", "priority must list 2 to 6 unique rooms");
  }
  for (const auto& [room, classes] : t.rooms.weights) {
    if (!rooms.contains(room)) {
      Fail("rooms", "weights for unlisted room '" + room + "'");
    }
    for (const auto& [name, weight] : classes) {
      if (t.vocabulary.FindByName(name) == nullptr) {
        Fail("rooms", "class '" + name + "' is not in the vocabulary");
      }
    }
  }
  if (t.affordances.empty()) Fail("affordances", "no activities");
  std::set<std::string> activities;
  for (const Affordance& a : t.affordances) {
    if (!activities.insert(a.activity).second) {
      Fail("affordances", "duplicate activity '" + a.activity + "'");
    }
    for (const std::string& room : a.rooms) {
      if (!rooms.contains(room)) {
        Fail("affordances", "activity '" + a.activity +
                                "' names unknown room '" + room + "'");
      }
    }
  }
  std::set<std::string> names;
  for (const PaletteColor& c : t.palette) {
    if (!names.insert(c.name).second) {
      Fail("palette", "duplicate color '" + c.name + "'");
    }
  }
  if (t.palette.size() < 2) Fail("palette", "needs at least two colors");
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

Vocabulary::Vocabulary(std::vector<ClassInfo> classes)
    : classes_(std::move(classes)) {
  std::sort(classes_.begin(), classes_.end(),
            [](const ClassInfo& a, const ClassInfo& b) { return a.id < b.id; });
  std::set<std::string> names;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].id <= 0) Fail("vocabulary", "class ids must be > 0");
    if (i > 0 && classes_[i].id == classes_[i - 1].id) {
      Fail("vocabulary", "duplicate class id " + std::to_string(classes_[i].id));
    }
    if (!names.insert(classes_[i].name).second) {
      Fail("vocabulary", "duplicate class name '" + classes_[i].name + "'");
    }
  }
}

const ClassInfo* Vocabulary::Find(int id) const {
  auto it = std::lower_bound(
      classes_.begin(), classes_.end(), id,
      [](const ClassInfo& c, int value) { return c.id < value; });
  return it != classes_.end() && it->id == id ? &*it : nullptr;
}

const ClassInfo* Vocabulary::FindByName(std::string_view name) const {
  for (const ClassInfo& c : classes_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

QaTables QaTables::Parse(std::string_view vocabulary_toml,
                         std::string_view rooms_toml,
                         std::string_view affordances_toml,
                         std::string_view palette_toml) {
  QaTables t;
  t.vocabulary = Vocabulary(ParseVocabulary(vocabulary_toml));
  t.rooms = ParseRooms(rooms_toml);
  t.affordances = ParseAffordances(affordances_toml);
  t.palette = ParsePalette(palette_toml);
  CrossValidate(t);
  return t;
}

QaTables QaTables::Load(const std::filesystem::path& dir) {
  return Parse(ReadText(dir / "vocabulary.toml"), ReadText(dir / "rooms.toml"),
               ReadText(dir / "affordances.toml"),
               ReadText(dir / "palette.toml"));
}

const QaTables& QaTables::Defaults() {
  static const QaTables tables = Parse(kDefaultVocabulary, kDefaultRooms,
                                       kDefaultAffordances, kDefaultPalette);
  return tables;
}

}  // namespace dimlight::qa
