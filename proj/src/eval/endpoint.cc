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

#include "dimlight/eval/endpoint.h"

#include <cstdlib>
#include <fstream>
#include <iterator>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <openssl/evp.h>

#include <boost/random/uniform_int_distribution.hpp>

#include "dimlight/error.h"
#include "dimlight/seed.h"

namespace dimlight::eval {

using nlohmann::json;

namespace {

EndpointKind ParseKind(const std::string& kind) {
  if (kind == "openai-chat") return EndpointKind::kOpenAiChat;
  if (kind == "stub-oracle") return EndpointKind::kStubOracle;
  if (kind == "stub-random") return EndpointKind::kStubRandom;
  if (kind == "stub-constant") return EndpointKind::kStubConstant;
  throw Error(ErrorKind::kConfig, "unknown endpoint kind '" + kind + "'");
}

class OracleClient : public ModelClient {
 public:
  std::string Ask(const ModelRequest& request) override {
    return request.pair->answer();
  }
};

class RandomClient : public ModelClient {
 public:
  explicit RandomClient(std::uint64_t seed) : seed_(seed) {}

  // Seeded per request, so replies do not depend on scheduling.
  std::string Ask(const ModelRequest& request) override {
    const qa::QAPair& p = *request.pair;
    RandomStream rng(SeedHasher()
                         .Add(seed_)
                         .Add(p.scene)
                         .Add(p.frame)
                         .Add(qa::FamilyName(p.family))
                         .Add(request.condition_key)
                         .Finish());
    boost::random::uniform_int_distribution<std::size_t> pick(
        0, p.choices.size() - 1);
    return p.choices[pick(rng)];
  }

 private:
  std::uint64_t seed_;
};

class ConstantClient : public ModelClient {
 public:
  explicit ConstantClient(std::string reply) : reply_(std::move(reply)) {}
  std::string Ask(const ModelRequest&) override { return reply_; }

 private:
  std::string reply_;
};

class ChatClient : public ModelClient {
 public:
  explicit ChatClient(const EndpointDescriptor& endpoint) : endpoint_(endpoint) {
    const std::size_t scheme = endpoint.url.find("://");
    if (scheme == std::string::npos) {
      throw Error(ErrorKind::kConfig, "endpoint url needs a scheme: " +
                                          endpoint.url);
    }
    const std::size_t path = endpoint.url.find('/', scheme + 3);
    base_ = endpoint.url.substr(0, path);
    path_ = path == std::string::npos ? "/" : endpoint.url.substr(path);
    if (!endpoint.auth_env.empty()) {
      const char* key = std::getenv(endpoint.auth_env.c_str());
      if (key == nullptr || *key == '\0') {
        throw Error(ErrorKind::kConfig, "environment variable " +
                                            endpoint.auth_env + " is not set");
      }
      token_ = key;
    }
  }

  std::string Ask(const ModelRequest& request) override {
    json content;
    if (request.image) {
      content = json::array(
          {{{"type", "text"}, {"text", request.prompt}},
           {{"type", "image_url"},
            {"image_url",
             {{"url", "data:image/png;base64," + Base64File(*request.image)}}}}});
    } else {
      content = request.prompt;
    }
    json body = {{"model", endpoint_.model},
                 {"messages", {{{"role", "user"}, {"content", content}}}},
                 {"temperature", endpoint_.temperature},
                 {"max_tokens", endpoint_.max_tokens}};
    body.update(endpoint_.extra);

    httplib::Client client(base_);
    client.set_connection_timeout(endpoint_.timeout_s, 0);
    client.set_read_timeout(endpoint_.timeout_s, 0);
    client.set_write_timeout(endpoint_.timeout_s, 0);
    httplib::Headers headers;
    if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
    const httplib::Result result =
        client.Post(path_, headers, body.dump(), "application/json");
    if (!result) {
      throw TransportError("request to " + endpoint_.url + " failed: " +
                           httplib::to_string(result.error()));
    }
    const int status = result->status;
    if (status == 429 || status >= 500) {
      throw TransportError("HTTP " + std::to_string(status) + " from " +
                           endpoint_.url);
    }
    if (status != 200) {
      throw Error(ErrorKind::kIo, "HTTP " + std::to_string(status) + " from " +
                                      endpoint_.url + ": " +
                                      result->body.substr(0, 200));
    }
    try {
      const json reply = json::parse(result->body);
      const json& message = reply.at("choices").at(0).at("message");
      const json& text = message.at("content");
      return text.is_string() ? text.get<std::string>() : text.dump();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kIo, "unexpected reply from " + endpoint_.url +
                                      ": " + e.what());
    }
  }

 private:
  EndpointDescriptor endpoint_;
  std::string base_;
  std::string path_;
  std::string token_;
};

}  // namespace

EndpointDescriptor EndpointDescriptor::FromJson(const json& doc) {
  EndpointDescriptor e;
  try {
    e.kind = ParseKind(doc.at("kind").get<std::string>());
    e.id = doc.value("id", std::string());
    e.url = doc.value("url", std::string());
    e.model = doc.value("model", std::string());
    e.auth_env = doc.value("auth_env", std::string());
    e.blind = doc.value("blind", false);
    e.temperature = doc.value("temperature", 0.0);
    e.max_tokens = doc.value("max_tokens", 16);
    e.retries = doc.value("retries", 3);
    e.backoff_ms = doc.value("backoff_ms", 500);
    e.timeout_s = doc.value("timeout_s", 60);
    e.concurrency = doc.value("concurrency", 4);
    e.requests_per_second = doc.value("requests_per_second", 0.0);
    e.seed = doc.value("seed", std::uint64_t{0});
    e.response = doc.value("response", std::string());
    e.extra = doc.value("extra", json::object());
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::kConfig,
                std::string("invalid endpoint config: ") + ex.what());
  }
  if (e.id.empty()) e.id = e.model.empty() ? doc.at("kind").get<std::string>() : e.model;
  if (e.kind == EndpointKind::kOpenAiChat && (e.url.empty() || e.model.empty())) {
    throw Error(ErrorKind::kConfig, "openai-chat endpoints need url and model");
  }
  if (e.retries < 0 || e.backoff_ms < 0 || e.timeout_s <= 0 ||
      e.concurrency < 1 || e.requests_per_second < 0.0 || e.max_tokens < 1) {
    throw Error(ErrorKind::kConfig, "endpoint limits out of range");
  }
  if (!e.extra.is_object()) {
    throw Error(ErrorKind::kConfig, "endpoint 'extra' must be an object");
  }
  return e;
}

EndpointDescriptor EndpointDescriptor::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  try {
    return FromJson(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kConfig, path.string() + ": " + e.what());
  }
}

std::unique_ptr<ModelClient> MakeClient(const EndpointDescriptor& endpoint) {
  switch (endpoint.kind) {
    case EndpointKind::kOpenAiChat:
      return std::make_unique<ChatClient>(endpoint);
    case EndpointKind::kStubOracle:
      return std::make_unique<OracleClient>();
    case EndpointKind::kStubRandom:
      return std::make_unique<RandomClient>(endpoint.seed);
    case EndpointKind::kStubConstant:
      return std::make_unique<ConstantClient>(endpoint.response);
  }
  throw Error(ErrorKind::kConfig, "unsupported endpoint kind");
}

std::string Base64File(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

}  // namespace dimlight::eval
