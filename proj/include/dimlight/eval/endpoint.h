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

#ifndef DIMLIGHT_EVAL_ENDPOINT_H_
#define DIMLIGHT_EVAL_ENDPOINT_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "dimlight/qa/generate.h"

namespace dimlight::eval {

enum class EndpointKind {
  kOpenAiChat,    // POST {url} with an OpenAI-style chat-completions body
  kStubOracle,    // replies with the ground-truth choice
  kStubRandom,    // replies with a uniformly drawn choice
  kStubConstant,  // replies with a fixed string
};

// JSON endpoint config, e.g.
//   {"kind": "openai-chat", "id": "my-vlm",
//    "url": "http://localhost:8000/v1/chat/completions",
//    "model": "served-model-name", "auth_env": "API_KEY"}
// Optional: blind, temperature (0), max_tokens (16), retries (3),
// backoff_ms (500), timeout_s (60), concurrency (4), requests_per_second
// (0 = unlimited), seed (stub-random), response (stub-constant), extra
// (object merged into the request body).
struct EndpointDescriptor {
  EndpointKind kind = EndpointKind::kStubOracle;
  std::string id;
  std::string url;
  std::string model;
  std::string auth_env;
  bool blind = false;
  double temperature = 0.0;
  int max_tokens = 16;
  int retries = 3;
  int backoff_ms = 500;
  int timeout_s = 60;
  int concurrency = 4;
  double requests_per_second = 0.0;
  std::uint64_t seed = 0;
  std::string response;
  nlohmann::json extra = nlohmann::json::object();

  // kConfig on unknown kinds or fields with invalid values.
  static EndpointDescriptor FromJson(const nlohmann::json& doc);
  static EndpointDescriptor Load(const std::filesystem::path& path);
};

struct ModelRequest {
  const qa::QAPair* pair = nullptr;
  std::string prompt;
  // Unset in blind mode.
  std::optional<std::filesystem::path> image;
  // Distinguishes otherwise identical requests under different conditions.
  std::string condition_key;
};

// A failure worth retrying: connection errors, timeouts, HTTP 429 and 5xx.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelClient {
 public:
  virtual ~ModelClient() = default;
  // Raw reply text. Throws TransportError for retryable failures and
  // dimlight::Error for permanent ones. Must be safe to call concurrently.
  virtual std::string Ask(const ModelRequest& request) = 0;
};

std::unique_ptr<ModelClient> MakeClient(const EndpointDescriptor& endpoint);

// Standard base64 of a file's bytes.
std::string Base64File(const std::filesystem::path& path);

}  // namespace dimlight::eval

#endif  // DIMLIGHT_EVAL_ENDPOINT_H_
