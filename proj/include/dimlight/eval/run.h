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

#ifndef DIMLIGHT_EVAL_RUN_H_
#define DIMLIGHT_EVAL_RUN_H_

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dimlight/eval/condition.h"
#include "dimlight/eval/endpoint.h"
#include "dimlight/qa/generate.h"

namespace dimlight::eval {

struct EvalRecord {
  std::string model;
  std::string scene;
  std::string frame;
  qa::Family family = qa::Family::kRoomType;
  std::string condition;  // Condition::Key()
  std::string prompt_version;
  std::string raw_response;
  std::optional<int> parsed_index;  // unset = unparseable or failed
  std::optional<std::string> parsed_choice;
  int answer_index = 0;
  int num_choices = 0;
  bool correct = false;
  // Transport failure after all retries; scored incorrect.
  bool failed = false;
  std::string error;
  int attempts = 0;
  double latency_ms = 0.0;

  // model|condition|scene|frame|family; the journal keeps the last record
  // per key.
  std::string Key() const;
  nlohmann::json ToJson() const;
  static EvalRecord FromJson(const nlohmann::json& doc);
};

// Append-only JSON Lines journal with a single writer lock.
class Journal {
 public:
  explicit Journal(const std::filesystem::path& path);
  void Append(const EvalRecord& record);

  // Every record in file order. A torn final line (interrupted write) is
  // ignored; malformed lines elsewhere throw kStructural.
  static std::vector<EvalRecord> Read(const std::filesystem::path& path);

 private:
  std::mutex mutex_;
  std::ofstream out_;
};

// Last record per key, in order of each key's first appearance.
std::vector<EvalRecord> LatestRecords(const std::vector<EvalRecord>& records);

struct EvalOptions {
  std::filesystem::path images;
  std::optional<std::filesystem::path> llie_images;
  std::vector<Condition> conditions;
  std::filesystem::path journal;
  // Stop after issuing this many new requests; the journal stays valid and
  // a later run resumes from it.
  std::optional<std::size_t> max_new_requests;
};

struct EvalRunSummary {
  // One record per (qa, condition) answered so far, QA-major order.
  std::vector<EvalRecord> records;
  std::size_t resumed = 0;
  std::size_t issued = 0;
  std::size_t failed = 0;
};

// Queries `client` for every (qa, condition) pair not yet answered in the
// journal. Missing images throw kStructural before any request; failed
// records from earlier runs are retried.
EvalRunSummary RunEval(const EndpointDescriptor& endpoint, ModelClient& client,
                       const std::vector<qa::QAPair>& pairs,
                       const EvalOptions& options);

}  // namespace dimlight::eval

#endif  // DIMLIGHT_EVAL_RUN_H_
