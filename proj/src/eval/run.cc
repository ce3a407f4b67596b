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

#include "dimlight/eval/run.h"

#include <chrono>
#include <map>
#include <thread>
#include <unordered_map>

#include "dimlight/error.h"
#include "dimlight/eval/prompt.h"
#include "dimlight/parallel.h"

namespace dimlight::eval {

using nlohmann::json;

namespace {

class RateLimiter {
 public:
  explicit RateLimiter(double per_second)
      : interval_(per_second > 0.0
                      ? std::chrono::duration_cast<Clock::duration>(
                            std::chrono::duration<double>(1.0 / per_second))
                      : Clock::duration::zero()) {}

  void Wait() {
    if (interval_ == Clock::duration::zero()) return;
    Clock::time_point slot;
    {
      std::lock_guard lock(mutex_);
      slot = std::max(next_, Clock::now());
      next_ = slot + interval_;
    }
    std::this_thread::sleep_until(slot);
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::duration interval_;
  std::mutex mutex_;
  Clock::time_point next_{};
};

struct Task {
  const qa::QAPair* pair;
  const Condition* condition;
  std::string key;
};

EvalRecord Query(const EndpointDescriptor& endpoint, ModelClient& client,
                 const Task& task, const EvalOptions& options,
                 RateLimiter& limiter) {
  const qa::QAPair& p = *task.pair;
  EvalRecord r;
  r.model = endpoint.id;
  r.scene = p.scene;
  r.frame = p.frame;
  r.family = p.family;
  r.condition = task.condition->Key();
  r.prompt_version = std::string(kPromptVersion);
  r.answer_index = p.answer_index;
  r.num_choices = static_cast<int>(p.choices.size());

  ModelRequest request;
  request.pair = &p;
  request.prompt = BuildPrompt(p, endpoint.blind);
  request.condition_key = r.condition;
  if (!endpoint.blind) {
    request.image = ConditionImagePath(*task.condition, options.images,
                                       options.llie_images, p.scene, p.frame);
  }

  const auto start = std::chrono::steady_clock::now();
  for (int attempt = 0;; ++attempt) {
    limiter.Wait();
    r.attempts = attempt + 1;
    try {
      r.raw_response = client.Ask(request);
      r.error.clear();
      break;
    } catch (const TransportError& e) {
      r.error = e.what();
      if (attempt >= endpoint.retries) {
        r.failed = true;
        break;
      }
      std::this_thread::sleep_for(
          std::chrono::milliseconds(endpoint.backoff_ms) * (1 << std::min(attempt, 10)));
    } catch (const std::exception& e) {
      r.error = e.what();
      r.failed = true;
      break;
    }
  }
  r.latency_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  if (!r.failed) {
    r.parsed_index = ParseResponse(r.raw_response, p.choices);
    if (r.parsed_index) r.parsed_choice = p.choices[*r.parsed_index];
    r.correct = r.parsed_index == p.answer_index;
  }
  return r;
}

}  // namespace

std::string EvalRecord::Key() const {
  return model + "|" + condition + "|" + scene + "|" + frame + "|" +
         std::string(qa::FamilyName(family));
}

json EvalRecord::ToJson() const {
  return {{"model", model},
          {"scene", scene},
          {"frame", frame},
          {"family", std::string(qa::FamilyName(family))},
          {"condition", condition},
          {"prompt_version", prompt_version},
          {"raw_response", raw_response},
          {"parsed_index", parsed_index ? json(*parsed_index) : json(nullptr)},
          {"parsed_choice", parsed_choice ? json(*parsed_choice) : json(nullptr)},
          {"answer_index", answer_index},
          {"num_choices", num_choices},
          {"correct", correct},
          {"failed", failed},
          {"error", error},
          {"attempts", attempts},
          {"latency_ms", latency_ms}};
}

EvalRecord EvalRecord::FromJson(const json& doc) {
  EvalRecord r;
  try {
    r.model = doc.at("model").get<std::string>();
    r.scene = doc.at("scene").get<std::string>();
    r.frame = doc.at("frame").get<std::string>();
    r.family = qa::ParseFamily(doc.at("family").get<std::string>());
    r.condition = doc.at("condition").get<std::string>();
    r.prompt_version = doc.value("prompt_version", std::string());
    r.raw_response = doc.value("raw_response", std::string());
    if (doc.contains("parsed_index") && !doc["parsed_index"].is_null()) {
      r.parsed_index = doc["parsed_index"].get<int>();
    }
    if (doc.contains("parsed_choice") && !doc["parsed_choice"].is_null()) {
      r.parsed_choice = doc["parsed_choice"].get<std::string>();
    }
    r.answer_index = doc.at("answer_index").get<int>();
    r.num_choices = doc.at("num_choices").get<int>();
    r.correct = doc.at("correct").get<bool>();
    r.failed = doc.value("failed", false);
    r.error = doc.value("error", std::string());
    r.attempts = doc.value("attempts", 0);
    r.latency_ms = doc.value("latency_ms", 0.0);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kStructural,
                std::string("malformed eval record: ") + e.what());
  }
  Condition::Parse(r.condition);
  return r;
}

Journal::Journal(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw Error(ErrorKind::kIo, "cannot open journal " + path.string());
}

void Journal::Append(const EvalRecord& record) {
  const std::string line = record.ToJson().dump() + "\n";
  std::lock_guard lock(mutex_);
  out_ << line;
  out_.flush();
  if (!out_) throw Error(ErrorKind::kIo, "journal write failed");
}

std::vector<EvalRecord> Journal::Read(const std::filesystem::path& path) {
  std::vector<EvalRecord> records;
  if (!std::filesystem::exists(path)) return records;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read journal " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  // A line without its newline was cut off mid-write.
  in.clear();
  in.seekg(0, std::ios::end);
  const bool torn_tail = in.tellg() > 0 && [&] {
    in.seekg(-1, std::ios::end);
    return in.get() != '\n';
  }();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(EvalRecord::FromJson(json::parse(lines[i])));
    } catch (const std::exception& e) {
      if (torn_tail && i + 1 == lines.size()) break;
      throw Error(ErrorKind::kStructural, path.string() + ":" +
                                              std::to_string(i + 1) + ": " +
                                              e.what());
    }
  }
  return records;
}

std::vector<EvalRecord> LatestRecords(const std::vector<EvalRecord>& records) {
  std::vector<EvalRecord> out;
  std::unordered_map<std::string, std::size_t> slot;
  for (const EvalRecord& r : records) {
    auto [it, inserted] = slot.try_emplace(r.Key(), out.size());
    if (inserted) {
      out.push_back(r);
    } else {
      out[it->second] = r;
    }
  }
  return out;
}

EvalRunSummary RunEval(const EndpointDescriptor& endpoint, ModelClient& client,
                       const std::vector<qa::QAPair>& pairs,
                       const EvalOptions& options) {
  if (options.conditions.empty()) {
    throw Error(ErrorKind::kConfig, "no evaluation conditions");
  }
  std::vector<Task> tasks;
  for (const qa::QAPair& p : pairs) {
    for (const Condition& c : options.conditions) {
      if (!endpoint.blind) {
        const auto image = ConditionImagePath(c, options.images,
                                              options.llie_images, p.scene,
                                              p.frame);
        if (!std::filesystem::exists(image)) {
          throw Error(ErrorKind::kStructural,
                      "missing image for " + c.Key() + ": " + image.string());
        }
      }
      EvalRecord probe;
      probe.model = endpoint.id;
      probe.condition = c.Key();
      probe.scene = p.scene;
      probe.frame = p.frame;
      probe.family = p.family;
      tasks.push_back({&p, &c, probe.Key()});
    }
  }

  std::unordered_map<std::string, EvalRecord> done;
  for (EvalRecord& r : LatestRecords(Journal::Read(options.journal))) {
    if (!r.failed) done.emplace(r.Key(), std::move(r));
  }
  std::vector<const Task*> pending;
  for (const Task& t : tasks) {
    if (!done.contains(t.key)) pending.push_back(&t);
  }
  if (options.max_new_requests && pending.size() > *options.max_new_requests) {
    pending.resize(*options.max_new_requests);
  }

  EvalRunSummary summary;
  Journal journal(options.journal);
  RateLimiter limiter(endpoint.requests_per_second);
  std::vector<EvalRecord> fresh(pending.size());
  std::vector<std::optional<std::string>> errors(pending.size());
  ParallelFor(pending.size(), endpoint.concurrency, [&](std::size_t i) {
    try {
      fresh[i] = Query(endpoint, client, *pending[i], options, limiter);
      journal.Append(fresh[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const auto& e : errors) {
    if (e) throw Error(ErrorKind::kIo, *e);
  }

  summary.issued = fresh.size();
  for (EvalRecord& r : fresh) {
    summary.failed += r.failed;
    done.insert_or_assign(r.Key(), std::move(r));
  }
  for (const Task& t : tasks) {
    auto it = done.find(t.key);
    if (it == done.end()) continue;
    summary.records.push_back(it->second);
  }
  summary.resumed = summary.records.size() - summary.issued;
  return summary;
}

}  // namespace dimlight::eval
