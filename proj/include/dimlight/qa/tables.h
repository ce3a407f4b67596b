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

#ifndef DIMLIGHT_QA_TABLES_H_
#define DIMLIGHT_QA_TABLES_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dimlight::qa {

struct ClassInfo {
  int id = 0;
  std::string name;
  bool structural = false;
  bool flat = false;

  bool operator==(const ClassInfo&) const = default;
};

// Semantic classes keyed by the id stored in label rasters. Ids are > 0;
// ids and names are unique.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<ClassInfo> classes);

  // nullptr for ids outside the vocabulary.
  const ClassInfo* Find(int id) const;
  const ClassInfo* FindByName(std::string_view name) const;
  // Sorted by id.
  const std::vector<ClassInfo>& classes() const { return classes_; }

  bool operator==(const Vocabulary&) const = default;

 private:
  std::vector<ClassInfo> classes_;
};

struct RoomRules {
  // Tie-break order and the room-type choice list. 2 to 6 unique names.
  std::vector<std::string> priority;
  // room -> class name -> weight (> 0).
  std::map<std::string, std::map<std::string, double>> weights;

  bool operator==(const RoomRules&) const = default;
};

struct Affordance {
  std::string activity;
  std::vector<std::string> rooms;

  bool operator==(const Affordance&) const = default;
};

struct PaletteColor {
  std::string name;
  std::array<std::uint8_t, 3> srgb{};
  std::array<double, 3> linear{};  // gamma-2.2 decode of srgb / 255

  bool operator==(const PaletteColor&) const = default;
};

// The editable rule tables behind question generation. Parse validates each
// table and the references between them (kConfig on any violation).
struct QaTables {
  Vocabulary vocabulary;
  RoomRules rooms;
  std::vector<Affordance> affordances;
  std::vector<PaletteColor> palette;

  static QaTables Parse(std::string_view vocabulary_toml,
                        std::string_view rooms_toml,
                        std::string_view affordances_toml,
                        std::string_view palette_toml);
  // Reads vocabulary.toml, rooms.toml, affordances.toml and palette.toml.
  static QaTables Load(const std::filesystem::path& dir);
  // The tables shipped in data/qa, compiled into the library.
  static const QaTables& Defaults();

  bool operator==(const QaTables&) const = default;
};

}  // namespace dimlight::qa

#endif  // DIMLIGHT_QA_TABLES_H_
