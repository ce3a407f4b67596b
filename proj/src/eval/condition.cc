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

#include "dimlight/eval/condition.h"

#include <algorithm>
#include <tuple>

#include "dimlight/error.h"

namespace dimlight::eval {

namespace {

[[noreturn]] void Bad(std::string_view item, std::string_view why) {
  throw Error(ErrorKind::kConfig, "condition '" + std::string(item) +
                                      "': " + std::string(why));
}

void ApplyModifiers(std::string_view item, std::string_view mods,
                    Condition& c) {
  std::size_t pos = 0;
  while (pos <= mods.size()) {
    const std::size_t plus = std::min(mods.find('+', pos), mods.size());
    const std::string_view mod = mods.substr(pos, plus - pos);
    pos = plus + 1;
    if (mod == "ev") {
      continue;
    } else if (mod == "noise") {
      c.noise = true;
    } else if (mod == "llie") {
      c.llie = true;
    } else {
      Bad(item, "unknown modifier '" + std::string(mod) + "'");
    }
  }
}

std::vector<DegradationLevel> ParseLevels(std::string_view item,
                                          std::string_view levels) {
  const std::size_t dots = levels.find("..");
  if (dots == std::string_view::npos) {
    return {DegradationLevel::Parse(levels)};
  }
  const int lo = DegradationLevel::Parse(levels.substr(0, dots)).index();
  const int hi = DegradationLevel::Parse(levels.substr(dots + 2)).index();
  if (lo > hi) Bad(item, "inverted level range");
  std::vector<DegradationLevel> out;
  for (int i = lo; i <= hi; ++i) out.emplace_back(i);
  return out;
}

}  // namespace

std::string Condition::Key() const {
  std::string key = level.name();
  if (level.index() == 0) return llie ? key + ":llie" : key;
  key += noise ? ":noise" : ":ev";
  if (llie) key += "+llie";
  return key;
}

Condition Condition::Parse(std::string_view key) {
  const std::size_t colon = key.find(':');
  Condition c;
  c.level = DegradationLevel::Parse(key.substr(0, colon));
  if (colon != std::string_view::npos) {
    ApplyModifiers(key, key.substr(colon + 1), c);
  }
  if (c.level.index() == 0 && c.noise) Bad(key, "L0 has no noisy variant");
  return c;
}

Variant Condition::variant() const {
  if (level.index() == 0) return Variant::kOriginal;
  return noise ? Variant::kNoisy : Variant::kEvDrop;
}

bool Condition::operator<(const Condition& other) const {
  auto rank = [](const Condition& c) {
    return std::tuple(!c.is_baseline(), c.noise, c.llie, c.level.index());
  };
  return rank(*this) < rank(other);
}

std::vector<Condition> ParseConditions(std::string_view spec) {
  std::vector<Condition> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', pos), spec.size());
    const std::string_view item = spec.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const std::size_t colon = item.find(':');
    for (DegradationLevel level : ParseLevels(item, item.substr(0, colon))) {
      std::string key = level.name();
      if (colon != std::string_view::npos) {
        key += std::string(item.substr(colon));
      }
      out.push_back(Condition::Parse(key));
    }
  }
  if (out.empty()) throw Error(ErrorKind::kConfig, "no conditions given");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::filesystem::path ConditionImagePath(
    const Condition& condition, const std::filesystem::path& images,
    const std::optional<std::filesystem::path>& llie_images,
    std::string_view scene, std::string_view frame) {
  if (condition.llie && !llie_images) {
    throw Error(ErrorKind::kConfig, "condition " + condition.Key() +
                                        " needs an LLIE image root");
  }
  return VariantPath(condition.llie ? *llie_images : images, scene, frame,
                     condition.level, condition.variant());
}

}  // namespace dimlight::eval
