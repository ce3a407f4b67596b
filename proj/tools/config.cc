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

#include "config.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include <toml.hpp>

#include "dimlight/error.h"

namespace dimlight::cli {
namespace {

using nlohmann::json;

json TomlToJson(const toml::node& node) {
  if (const toml::table* table = node.as_table()) {
    json out = json::object();
    for (const auto& [key, value] : *table) {
      out[std::string(key.str())] = TomlToJson(value);
    }
    return out;
  }
  if (const toml::array* array = node.as_array()) {
    json out = json::array();
    for (const toml::node& value : *array) out.push_back(TomlToJson(value));
    return out;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  // Dates and times have no JSON type; keep their TOML spelling.
  std::ostringstream text;
  node.visit([&](const auto& value) { text << value; });
  return text.str();
}

}  // namespace

json ParseConfigText(std::string_view text, std::string_view origin) {
  const auto first = std::find_if_not(text.begin(), text.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  });
  json doc;
  if (first != text.end() && *first == '{') {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::kConfig,
                  std::string(origin) + ": invalid JSON: " + e.what());
    }
  } else {
    try {
      doc = TomlToJson(toml::parse(text, origin));
    } catch (const toml::parse_error& e) {
      std::ostringstream message;
      message << origin << ": invalid TOML: " << e.description() << " at line "
              << e.source().begin.line;
      throw Error(ErrorKind::kConfig, message.str());
    }
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::kConfig,
                std::string(origin) + ": top level must be a table");
  }
  return doc;
}

json LoadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfigText(text.str(), path.string());
}

void RequireKnownKeys(const json& object, std::string_view where,
                      std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) {
    throw Error(ErrorKind::kConfig, std::string(where) + " must be a table");
  }
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorKind::kConfig,
                  "unknown config key '" + key + "' in " + std::string(where));
    }
  }
}

}  // namespace dimlight::cli
