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

#ifndef DIMLIGHT_EVAL_PROMPT_H_
#define DIMLIGHT_EVAL_PROMPT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dimlight/qa/generate.h"

namespace dimlight::eval {

// Bumped whenever the template text changes; stored in every record so
// results from different templates are never pooled.
inline constexpr std::string_view kPromptVersion = "mcq/1";

// Question, lettered choices and a single-answer instruction. The blind
// variant never mentions an image.
std::string BuildPrompt(const qa::QAPair& pair, bool blind);

// Index of the chosen answer, or nullopt when the reply is unparseable.
// Tried in order: normalized exact match, the longest choice that prefixes
// the reply at a word boundary, then a bare choice letter ("B", "(b)",
// "B. ..."). A prefix match that later names another choice is a hedge
// and stays unparseable.
// Normalization lowercases, collapses whitespace, strips surrounding
// punctuation and a leading article.
std::optional<int> ParseResponse(std::string_view raw,
                                 const std::vector<std::string>& choices);

}  // namespace dimlight::eval

#endif  // DIMLIGHT_EVAL_PROMPT_H_
