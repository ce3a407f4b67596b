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

#include "dimlight/eval/prompt.h"

#include <cctype>

namespace dimlight::eval {

namespace {

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

bool ContainsWord(const std::string& text, const std::string& word) {
  if (word.empty()) return false;
  for (std::size_t pos = text.find(word); pos != std::string::npos;
       pos = text.find(word, pos + 1)) {
    const std::size_t end = pos + word.size();
    if ((pos == 0 || !IsWordChar(text[pos - 1])) &&
        (end == text.size() || !IsWordChar(text[end]))) {
      return true;
    }
  }
  return false;
}

std::string Normalize(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  constexpr std::string_view kEdge = ".,!?;:\"'`*()[]";
  const std::size_t first = out.find_first_not_of(kEdge);
  if (first == std::string::npos) return "";
  const std::size_t last = out.find_last_not_of(kEdge);
  out = out.substr(first, last - first + 1);
  for (std::string_view article : {"a ", "an ", "the "}) {
    if (out.starts_with(article)) {
      out.erase(0, article.size());
      break;
    }
  }
  return out;
}

std::optional<int> LetterChoice(const std::string& reply, std::size_t count) {
  // Normalize() already dropped one layer of brackets and edge punctuation.
  std::size_t i = reply.starts_with('(') ? 1 : 0;
  if (i >= reply.size()) return std::nullopt;
  const char letter = reply[i];
  if (letter < 'a' || letter >= static_cast<char>('a' + count)) {
    return std::nullopt;
  }
  ++i;
  if (i < reply.size() && reply[i] == ')') ++i;
  const bool alone = i == reply.size();
  const bool marked = i < reply.size() && i > 0 &&
                      (reply[i] == '.' || reply[i] == ':' || reply[i - 1] == ')');
  if (!alone && !marked) return std::nullopt;
  return letter - 'a';
}

}  // namespace

std::string BuildPrompt(const qa::QAPair& pair, bool blind) {
  std::string prompt = blind ? "Answer the following question about an indoor "
                               "environment.\n"
                             : "Look at the picture and answer the following "
                               "question.\n";
  prompt += "Question: " + pair.question + "\nChoices:\n";
  for (std::size_t i = 0; i < pair.choices.size(); ++i) {
    prompt += static_cast<char>('A' + i);
    prompt += ". " + pair.choices[i] + "\n";
  }
  prompt +=
      "Reply with exactly one of the choices above, copied verbatim, and "
      "nothing else.";
  return prompt;
}

std::optional<int> ParseResponse(std::string_view raw,
                                 const std::vector<std::string>& choices) {
  const std::string reply = Normalize(raw);
  if (reply.empty()) return std::nullopt;
  std::vector<std::string> normalized;
  for (const std::string& c : choices) normalized.push_back(Normalize(c));

  for (std::size_t i = 0; i < normalized.size(); ++i) {
    if (reply == normalized[i]) return static_cast<int>(i);
  }
  // Distinct choices that both prefix the reply nest, so the longest match
  // is the unique most specific one ("tv stand" over "tv").
  std::optional<int> prefix;
  std::size_t longest = 0;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    const std::string& c = normalized[i];
    if (c.empty() || !reply.starts_with(c)) continue;
    if (reply.size() > c.size() && IsWordChar(reply[c.size()])) continue;
    if (c.size() > longest) {
      longest = c.size();
      prefix = static_cast<int>(i);
    }
  }
  if (prefix) {
    // A reply that goes on to name another choice is hedging.
    const std::string rest = reply.substr(longest);
    for (std::size_t i = 0; i < normalized.size(); ++i) {
      if (static_cast<int>(i) != *prefix && ContainsWord(rest, normalized[i])) {
        return std::nullopt;
      }
    }
    return prefix;
  }
  return LetterChoice(reply, choices.size());
}

}  // namespace dimlight::eval
