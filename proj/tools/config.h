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

#ifndef DIMLIGHT_TOOLS_CONFIG_H_
#define DIMLIGHT_TOOLS_CONFIG_H_

#include <filesystem>
#include <string_view>

#include <nlohmann/json.hpp>

namespace dimlight::cli {

// Parses a config document as JSON when its first non-space character is
// '{', as TOML otherwise. Throws kConfig on syntax errors.
nlohmann::json ParseConfigText(std::string_view text, std::string_view origin);
// kIo when unreadable.
nlohmann::json LoadConfigFile(const std::filesystem::path& path);

// Rejects keys of `object` outside `allowed` so typos fail loudly.
void RequireKnownKeys(const nlohmann::json& object, std::string_view where,
                      std::initializer_list<std::string_view> allowed);

}  // namespace dimlight::cli

#endif  // DIMLIGHT_TOOLS_CONFIG_H_
