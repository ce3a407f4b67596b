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

#ifndef DIMLIGHT_EVAL_CONDITION_H_
#define DIMLIGHT_EVAL_CONDITION_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dimlight/degrade.h"

namespace dimlight::eval {

// One evaluation condition: a ladder level, whether sensor noise is on, and
// whether images come from an externally enhanced (LLIE) tree.
struct Condition {
  DegradationLevel level{0};
  bool noise = false;
  bool llie = false;

  // "L0", "L3:ev", "L3:noise", "L3:ev+llie", "L3:noise+llie", "L0:llie".
  std::string Key() const;
  // Inverse of Key(); "L3" alone means "L3:ev".
  static Condition Parse(std::string_view key);
  bool is_baseline() const { return level.index() == 0 && !llie; }
  // Which degrade output holds this condition's image.
  Variant variant() const;

  // Baseline first, then rows (ev, ev+llie, noise, noise+llie), then level.
  bool operator<(const Condition& other) const;
  bool operator==(const Condition&) const = default;
};

// Comma-separated items, each "LEVELS[:MODS]" where LEVELS is a level or a
// "La..Lb" range and MODS is "ev", "noise", "llie" or "+"-joined
// combinations ("ev+noise" equals "noise"). Sorted by Condition::operator<,
// duplicates removed. kConfig on anything else, including noise at L0.
std::vector<Condition> ParseConditions(std::string_view spec);

// Image for a (scene, frame) under a condition, following the degrade
// output layout under `images`, or under `llie_images` for LLIE conditions.
// kConfig if an LLIE condition is requested without an LLIE root.
std::filesystem::path ConditionImagePath(
    const Condition& condition, const std::filesystem::path& images,
    const std::optional<std::filesystem::path>& llie_images,
    std::string_view scene, std::string_view frame);

}  // namespace dimlight::eval

#endif  // DIMLIGHT_EVAL_CONDITION_H_
