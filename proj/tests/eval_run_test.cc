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

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "dimlight/error.h"
#include "dimlight/eval/report.h"
#include "dimlight/eval/run.h"
#include "support/fs_helpers.h"

// Same configuration as the library's client so inline definitions agree.
// Included last: its system headers define macros that collide with Eigen.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

namespace dimlight::eval {
namespace {

using nlohmann::json;

std::vector<qa::QAPair> MakePairs(int count, int choices) {
  std::vector<qa::QAPair> out;
  const std::vector<std::string> names = {"red", "green", "blue", "black",
                                          "white", "gray"};
  for (int i = 0; i < count; ++i) {
    qa::QAPair p;
    p.scene = "scene" + std::to_string(i / 100);
    p.frame = "f" + std::to_string(i % 100);
    p.family = qa::Family::kObjectColor;
    p.question = "What color is the sofa in the scene?";
    p.choices.assign(names.begin(), names.begin() + choices);
    p.answer_index = i % choices;
    out.push_back(p);
  }
  return out;
}

EndpointDescriptor Stub(std::string kind, bool blind = true) {
  json doc = {{"kind", kind}, {"blind", blind}, {"concurrency", 4}};
  if (kind == "stub-constant") doc["response"] = "zxqv";
  if (kind == "stub-random") doc["seed"] = 11;
  return EndpointDescriptor::FromJson(doc);
}

void TouchImages(const std::filesystem::path& root,
                 const std::vector<qa::QAPair>& pairs,
                 const std::vector<Condition>& conditions) {
  for (const qa::QAPair& p : pairs) {
    for (const Condition& c : conditions) {
      const auto path = ConditionImagePath(c, root, root, p.scene, p.frame);
      std::filesystem::create_directories(path.parent_path());
      std::ofstream(path, std::ios::binary) << "\x89PNG";
    }
  }
}

json StripLatency(const EvalRecord& r) {
  json j = r.ToJson();
  j.erase("latency_ms");
  return j;
}

class EvalRunTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::MakeTempDir("eval_run"); }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  EvalOptions Options(const std::string& journal, std::string_view conditions) {
    EvalOptions o;
    o.images = dir_ / "images";
    o.conditions = ParseConditions(conditions);
    o.journal = dir_ / journal;
    return o;
  }

  std::filesystem::path dir_;
};

TEST_F(EvalRunTest, OracleScoresPerfectlyOnEveryCondition) {
  const auto pairs = MakePairs(40, 4);
  EvalOptions options = Options("oracle.jsonl", "L0,L1..L5:ev,L1..L5:noise");
  TouchImages(options.images, pairs, options.conditions);
  const auto endpoint = Stub("stub-oracle", /*blind=*/false);
  auto client = MakeClient(endpoint);
  const auto run = RunEval(endpoint, *client, pairs, options);
  EXPECT_EQ(run.records.size(), 40u * 11u);
  const AccuracyReport report = Score(run.records);
  for (const auto& [condition, cell] : report.table().at("stub-oracle")) {
    EXPECT_EQ(FormatPercent(cell.overall.hundredths()), "100.00")
        << condition.Key();
  }
}

TEST_F(EvalRunTest, GibberishIsAllUnparseable) {
  const auto pairs = MakePairs(30, 2);
  const auto endpoint = Stub("stub-constant");
  auto client = MakeClient(endpoint);
  const auto run = RunEval(endpoint, *client, pairs, Options("g.jsonl", "L0"));
  const Tally& t =
      Score(run.records).table().at("stub-constant").begin()->second.overall;
  EXPECT_EQ(t.correct, 0u);
  EXPECT_EQ(t.unparseable, 30u);
}

TEST_F(EvalRunTest, UniformRandomOnFourChoices) {
  const auto pairs = MakePairs(10000, 4);
  const auto endpoint = Stub("stub-random");
  auto client = MakeClient(endpoint);
  const auto run = RunEval(endpoint, *client, pairs, Options("r.jsonl", "L0"));
  const double acc =
      Score(run.records).table().at("stub-random").begin()->second.overall.accuracy();
  // Binomial sd at n = 1e4, p = 0.25 is 0.0043; 0.02 is over 4.6 sd.
  EXPECT_NEAR(acc, 0.25, 0.02);
}

TEST_F(EvalRunTest, ResumeMatchesUninterruptedRun) {
  const auto pairs = MakePairs(25, 3);
  const auto endpoint = Stub("stub-random");
  auto client = MakeClient(endpoint);
  const auto full =
      RunEval(endpoint, *client, pairs, Options("full.jsonl", "L0,L2:ev"));

  EvalOptions partial = Options("partial.jsonl", "L0,L2:ev");
  partial.max_new_requests = 17;
  const auto first = RunEval(endpoint, *client, pairs, partial);
  EXPECT_EQ(first.issued, 17u);
  EXPECT_EQ(first.records.size(), 17u);
  partial.max_new_requests.reset();
  const auto resumed = RunEval(endpoint, *client, pairs, partial);
  EXPECT_EQ(resumed.resumed, 17u);
  EXPECT_EQ(resumed.issued, 33u);
  ASSERT_EQ(resumed.records.size(), full.records.size());
  for (std::size_t i = 0; i < full.records.size(); ++i) {
    EXPECT_EQ(StripLatency(resumed.records[i]), StripLatency(full.records[i]));
  }
  // A third run has nothing left to ask.
  EXPECT_EQ(RunEval(endpoint, *client, pairs, partial).issued, 0u);
}

TEST_F(EvalRunTest, TornJournalTailIsIgnored) {
  const auto pairs = MakePairs(5, 2);
  const auto endpoint = Stub("stub-oracle");
  auto client = MakeClient(endpoint);
  EvalOptions options = Options("torn.jsonl", "L0");
  RunEval(endpoint, *client, pairs, options);
  std::ofstream(options.journal, std::ios::app) << "{\"model\":\"stub-or";
  EXPECT_EQ(Journal::Read(options.journal).size(), 5u);
  EXPECT_EQ(RunEval(endpoint, *client, pairs, options).issued, 0u);

  std::ofstream(options.journal, std::ios::app) << "\n{broken}\n";
  EXPECT_THROW(Journal::Read(options.journal), Error);
}

TEST_F(EvalRunTest, MissingImageIsStructuralError) {
  const auto pairs = MakePairs(3, 2);
  const auto endpoint = Stub("stub-oracle", /*blind=*/false);
  auto client = MakeClient(endpoint);
  try {
    RunEval(endpoint, *client, pairs, Options("m.jsonl", "L1:ev"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kStructural);
  }
}

TEST(EndpointTest, DescriptorDefaultsAndValidation) {
  const auto e = EndpointDescriptor::FromJson(
      {{"kind", "openai-chat"}, {"url", "http://h/v1"}, {"model", "m"}});
  EXPECT_EQ(e.id, "m");
  EXPECT_EQ(e.temperature, 0.0);
  EXPECT_EQ(e.retries, 3);
  EXPECT_FALSE(e.blind);
  EXPECT_THROW(EndpointDescriptor::FromJson({{"kind", "telepathy"}}), Error);
  EXPECT_THROW(EndpointDescriptor::FromJson({{"kind", "openai-chat"}}), Error);
  EXPECT_THROW(EndpointDescriptor::FromJson(
                   {{"kind", "stub-oracle"}, {"concurrency", 0}}),
               Error);
}

TEST(EndpointTest, Base64MatchesReference) {
  const auto dir = testing::MakeTempDir("b64");
  std::ofstream(dir / "x.bin", std::ios::binary) << "hello";
  EXPECT_EQ(Base64File(dir / "x.bin"), "aGVsbG8=");
  std::ofstream(dir / "y.bin", std::ios::binary);
  EXPECT_EQ(Base64File(dir / "y.bin"), "");
  std::filesystem::remove_all(dir);
}

// A local chat-completions server that answers with the first choice letter
// and can be told to fail a number of times first.
class MockServer {
 public:
  explicit MockServer(int failures_before_success = 0, int status = 503)
      : failures_(failures_before_success), status_(status) {
    server_.Post("/v1/chat/completions",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   ++requests_;
                   last_body_ = json::parse(req.body);
                   last_auth_ = req.get_header_value("Authorization");
                   if (failures_.fetch_sub(1) > 0) {
                     res.status = status_;
                     return;
                   }
                   json reply = {
                       {"choices",
                        {{{"message",
                           {{"role", "assistant"}, {"content", "A."}}}}}}};
                   res.set_content(reply.dump(), "application/json");
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
  }
  int requests() const { return requests_; }
  const json& last_body() const { return last_body_; }
  const std::string& last_auth() const { return last_auth_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> failures_;
  int status_;
  std::atomic<int> requests_{0};
  json last_body_;
  std::string last_auth_;
};

EndpointDescriptor ChatEndpoint(const std::string& url, bool blind) {
  return EndpointDescriptor::FromJson({{"kind", "openai-chat"},
                                       {"id", "mock"},
                                       {"url", url},
                                       {"model", "mock-vlm"},
                                       {"auth_env", "DIMLIGHT_TEST_KEY"},
                                       {"blind", blind},
                                       {"retries", 3},
                                       {"backoff_ms", 1},
                                       {"timeout_s", 5},
                                       {"concurrency", 1}});
}

TEST_F(EvalRunTest, ChatClientSendsImageAndParsesReply) {
  ::setenv("DIMLIGHT_TEST_KEY", "secret", 1);
  MockServer server;
  const auto pairs = MakePairs(3, 2);
  EvalOptions options = Options("chat.jsonl", "L0");
  TouchImages(options.images, pairs, options.conditions);
  const auto endpoint = ChatEndpoint(server.url(), /*blind=*/false);
  auto client = MakeClient(endpoint);
  const auto run = RunEval(endpoint, *client, pairs, options);
  ASSERT_EQ(run.records.size(), 3u);
  EXPECT_EQ(server.requests(), 3);
  EXPECT_EQ(server.last_auth(), "Bearer secret");
  const json& body = server.last_body();
  EXPECT_EQ(body["model"], "mock-vlm");
  EXPECT_EQ(body["temperature"], 0.0);
  const json& content = body["messages"][0]["content"];
  ASSERT_TRUE(content.is_array());
  EXPECT_EQ(content[1]["image_url"]["url"], "data:image/png;base64,iVBORw==");
  for (const EvalRecord& r : run.records) {
    EXPECT_EQ(r.parsed_index, 0);
    EXPECT_EQ(r.correct, r.answer_index == 0);
  }
}

TEST_F(EvalRunTest, BlindChatSendsTextOnly) {
  ::setenv("DIMLIGHT_TEST_KEY", "secret", 1);
  MockServer server;
  const auto endpoint = ChatEndpoint(server.url(), /*blind=*/true);
  auto client = MakeClient(endpoint);
  RunEval(endpoint, *client, MakePairs(1, 2), Options("blind.jsonl", "L3:noise"));
  const json& content = server.last_body()["messages"][0]["content"];
  ASSERT_TRUE(content.is_string());
  EXPECT_EQ(content.get<std::string>().find("image"), std::string::npos);
}

TEST_F(EvalRunTest, RetriesTransientFailures) {
  ::setenv("DIMLIGHT_TEST_KEY", "secret", 1);
  MockServer server(/*failures_before_success=*/2);
  const auto endpoint = ChatEndpoint(server.url(), /*blind=*/true);
  auto client = MakeClient(endpoint);
  const auto run =
      RunEval(endpoint, *client, MakePairs(1, 2), Options("retry.jsonl", "L0"));
  ASSERT_EQ(run.records.size(), 1u);
  EXPECT_EQ(run.records[0].attempts, 3);
  EXPECT_FALSE(run.records[0].failed);
  EXPECT_EQ(server.requests(), 3);
}

TEST_F(EvalRunTest, PermanentAndExhaustedFailuresAreRecorded) {
  ::setenv("DIMLIGHT_TEST_KEY", "secret", 1);
  {
    MockServer server(/*failures_before_success=*/100, /*status=*/400);
    const auto endpoint = ChatEndpoint(server.url(), /*blind=*/true);
    auto client = MakeClient(endpoint);
    const auto run =
        RunEval(endpoint, *client, MakePairs(2, 2), Options("bad.jsonl", "L0"));
    EXPECT_EQ(run.failed, 2u);
    EXPECT_EQ(run.records[0].attempts, 1);
  }
  // Nothing listens on the port any more: every attempt is a transport error.
  MockServer probe;
  const std::string dead_url = probe.url();
  EvalOptions options = Options("dead.jsonl", "L0");
  const auto endpoint = ChatEndpoint(
      "http://127.0.0.1:1/v1/chat/completions", /*blind=*/true);
  auto client = MakeClient(endpoint);
  const auto run = RunEval(endpoint, *client, MakePairs(2, 2), options);
  EXPECT_EQ(run.failed, 2u);
  EXPECT_EQ(run.records[0].attempts, 4);
  EXPECT_FALSE(run.records[0].correct);

  // A later run retries failed keys and replaces them.
  const auto retry_endpoint = ChatEndpoint(dead_url, /*blind=*/true);
  auto retry_client = MakeClient(retry_endpoint);
  const auto again = RunEval(retry_endpoint, *retry_client, MakePairs(2, 2), options);
  EXPECT_EQ(again.issued, 2u);
  EXPECT_EQ(again.failed, 0u);
}

TEST(EndpointTest, MissingAuthVariableIsConfigError) {
  ::unsetenv("DIMLIGHT_UNSET_KEY");
  auto e = EndpointDescriptor::FromJson({{"kind", "openai-chat"},
                                         {"url", "http://127.0.0.1:1/x"},
                                         {"model", "m"},
                                         {"auth_env", "DIMLIGHT_UNSET_KEY"}});
  EXPECT_THROW(MakeClient(e), Error);
}

}  // namespace
}  // namespace dimlight::eval
