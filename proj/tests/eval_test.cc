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

#include <algorithm>
#include <random>

#include "dimlight/error.h"
#include "dimlight/eval/condition.h"
#include "dimlight/eval/prompt.h"
#include "dimlight/eval/report.h"

namespace dimlight::eval {
namespace {

qa::QAPair YesNo() {
  qa::QAPair p;
  p.scene = "s";
  p.frame = "f";
  p.family = qa::Family::kObjectRecognition;
  p.question = "Is there a cushion in the scene?";
  p.choices = {"Yes", "No"};
  p.answer_index = 0;
  return p;
}

TEST(PromptTest, ListsExactlyTheChoices) {
  const std::string prompt = BuildPrompt(YesNo(), false);
  EXPECT_NE(prompt.find("Is there a cushion in the scene?"), std::string::npos);
  EXPECT_NE(prompt.find("A. Yes\nB. No\n"), std::string::npos);
  EXPECT_EQ(prompt.find("C. "), std::string::npos);
  EXPECT_EQ(prompt, BuildPrompt(YesNo(), false));
}

TEST(PromptTest, BlindPromptHasNoImageReference) {
  const std::string blind = BuildPrompt(YesNo(), true);
  for (std::string_view word : {"image", "picture", "photo", "look"}) {
    std::string lower = blind;
    std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
    EXPECT_EQ(lower.find(word), std::string::npos) << word;
  }
  EXPECT_NE(BuildPrompt(YesNo(), false).find("picture"), std::string::npos);
}

TEST(ParseResponseTest, NormalizedExactMatch) {
  const std::vector<std::string> yn = {"Yes", "No"};
  EXPECT_EQ(ParseResponse("yes.", yn), 0);
  EXPECT_EQ(ParseResponse("  NO  ", yn), 1);
  EXPECT_EQ(ParseResponse("\"No\"", yn), 1);
  const std::vector<std::string> rooms = {"bedroom", "living room"};
  EXPECT_EQ(ParseResponse("Living   Room", rooms), 1);
  EXPECT_EQ(ParseResponse("The living room.", rooms), 1);
}

TEST(ParseResponseTest, LetterFallback) {
  const std::vector<std::string> c = {"chair", "table", "sofa"};
  EXPECT_EQ(ParseResponse("B", c), 1);
  EXPECT_EQ(ParseResponse("(c)", c), 2);
  EXPECT_EQ(ParseResponse("A. chair", c), 0);
  EXPECT_EQ(ParseResponse("b) table", c), 1);
  EXPECT_EQ(ParseResponse("D", c), std::nullopt);
  EXPECT_EQ(ParseResponse("bad", c), std::nullopt);
}

TEST(ParseResponseTest, PrefixAtWordBoundary) {
  const std::vector<std::string> c = {"tv", "tv stand", "chair"};
  EXPECT_EQ(ParseResponse("Chair, clearly", c), 2);
  EXPECT_EQ(ParseResponse("tv stand is nearest", c), 1);
  EXPECT_EQ(ParseResponse("tvs", c), std::nullopt);
  EXPECT_EQ(ParseResponse("chairs", c), std::nullopt);
}

TEST(ParseResponseTest, HedgesAreUnparseable) {
  const std::vector<std::string> c = {"couch", "chair", "lamp"};
  EXPECT_EQ(ParseResponse("maybe a couch or chair", c), std::nullopt);
  EXPECT_EQ(ParseResponse("couch or chair", c), std::nullopt);
  EXPECT_EQ(ParseResponse("", c), std::nullopt);
  EXPECT_EQ(ParseResponse("?!", c), std::nullopt);
}

TEST(ConditionTest, KeysRoundTrip) {
  for (std::string_view key : {"L0", "L0:llie", "L1:ev", "L3:noise",
                               "L4:ev+llie", "L5:noise+llie"}) {
    EXPECT_EQ(Condition::Parse(key).Key(), key);
  }
  EXPECT_EQ(Condition::Parse("L3").Key(), "L3:ev");
  EXPECT_EQ(Condition::Parse("L3:llie+ev+noise").Key(), "L3:noise+llie");
  EXPECT_THROW(Condition::Parse("L0:noise"), Error);
  EXPECT_THROW(Condition::Parse("L2:blur"), Error);
  EXPECT_THROW(Condition::Parse("L9"), Error);
}

TEST(ConditionTest, ParsesListsInCanonicalOrder) {
  const auto conditions = ParseConditions("L3:noise+llie,L1..L2:ev,L0,L1:ev");
  std::vector<std::string> keys;
  for (const Condition& c : conditions) keys.push_back(c.Key());
  EXPECT_EQ(keys, (std::vector<std::string>{"L0", "L1:ev", "L2:ev",
                                            "L3:noise+llie"}));
  EXPECT_EQ(ParseConditions("L1..L5:noise").size(), 5u);
  EXPECT_THROW(ParseConditions(""), Error);
  EXPECT_THROW(ParseConditions("L4..L2"), Error);
}

TEST(ConditionTest, ImagePathsFollowDegradeLayout) {
  const std::filesystem::path images = "/data/deg";
  const std::filesystem::path llie = "/data/enh";
  EXPECT_EQ(ConditionImagePath(Condition::Parse("L0"), images, llie, "s", "f"),
            images / "s/f/L0/original.png");
  EXPECT_EQ(ConditionImagePath(Condition::Parse("L2:ev"), images, llie, "s", "f"),
            images / "s/f/L2/evdrop.png");
  EXPECT_EQ(ConditionImagePath(Condition::Parse("L2:noise+llie"), images, llie,
                               "s", "f"),
            llie / "s/f/L2/noisy.png");
  EXPECT_THROW(ConditionImagePath(Condition::Parse("L2:ev+llie"), images,
                                  std::nullopt, "s", "f"),
               Error);
}

EvalRecord Record(std::string model, std::string condition, bool correct,
                  qa::Family family = qa::Family::kRoomType, int i = 0) {
  EvalRecord r;
  r.model = std::move(model);
  r.condition = std::move(condition);
  r.scene = "s";
  r.frame = "f" + std::to_string(i);
  r.family = family;
  r.prompt_version = std::string(kPromptVersion);
  r.correct = correct;
  r.parsed_index = correct ? 0 : 1;
  r.num_choices = 2;
  return r;
}

std::vector<EvalRecord> Block(const std::string& model,
                              const std::string& condition, int correct,
                              int total) {
  std::vector<EvalRecord> out;
  for (int i = 0; i < total; ++i) {
    out.push_back(Record(model, condition, i < correct,
                         qa::kAllFamilies[i % 5], i));
  }
  return out;
}

TEST(ScoreTest, ThreeOfFourIsSeventyFive) {
  auto records = Block("m", "L0", 3, 4);
  const AccuracyReport report = Score(records);
  const Tally& t = report.table().at("m").at(Condition::Parse("L0")).overall;
  EXPECT_EQ(t.accuracy(), 0.75);
  EXPECT_EQ(FormatPercent(t.hundredths()), "75.00");
}

TEST(ScoreTest, DeltaConvention) {
  auto records = Block("llava", "L0", 6655, 10000);
  auto l3 = Block("llava", "L3:ev", 5948, 10000);
  records.insert(records.end(), l3.begin(), l3.end());
  const AccuracyReport report = Score(records);
  const auto delta = report.Delta("llava", Condition::Parse("L3:ev"));
  ASSERT_TRUE(delta.has_value());
  EXPECT_EQ(FormatDelta(*delta), "-7.07");
  EXPECT_FALSE(report.Delta("llava", Condition::Parse("L0")).has_value());
  EXPECT_NE(report.ToMarkdown().find("59.48 (-7.07)"), std::string::npos);
}

TEST(ScoreTest, FormatsSignedHundredths) {
  EXPECT_EQ(FormatDelta(18), "+0.18");
  EXPECT_EQ(FormatDelta(-34), "-0.34");
  EXPECT_EQ(FormatDelta(0), "+0.00");
  EXPECT_EQ(FormatDelta(-1946), "-19.46");
  EXPECT_EQ(FormatPercent(10000), "100.00");
  EXPECT_EQ(FormatPercent(5), "0.05");
}

TEST(ScoreTest, RoundsHalfAwayFromZero) {
  Tally t{.correct = 1, .total = 8};  // 12.5%
  EXPECT_EQ(t.hundredths(), 1250);
  t = {.correct = 1, .total = 3};  // 33.333..%
  EXPECT_EQ(t.hundredths(), 3333);
  t = {.correct = 2, .total = 3};  // 66.666..%
  EXPECT_EQ(t.hundredths(), 6667);
  t = {.correct = 1, .total = 80000};  // 0.00125% -> 0.00
  EXPECT_EQ(t.hundredths(), 0);
  t = {.correct = 1, .total = 40000};  // 0.0025% -> 0.00, 0.005% -> 0.01
  EXPECT_EQ(t.hundredths(), 0);
  t = {.correct = 1, .total = 20000};
  EXPECT_EQ(t.hundredths(), 1);
}

TEST(ScoreTest, TableShapeBaselinePlusLevelsByRows) {
  std::vector<EvalRecord> records = Block("m", "L0", 9, 10);
  for (std::string_view row : {"ev", "ev+llie", "noise", "noise+llie"}) {
    for (int level = 1; level <= 5; ++level) {
      auto block = Block("m", "L" + std::to_string(level) + ":" + std::string(row),
                         10 - level, 10);
      records.insert(records.end(), block.begin(), block.end());
    }
  }
  const AccuracyReport report = Score(records);
  EXPECT_EQ(report.cell_count(), 21u);  // L0 + 4 rows x L1..L5
  const std::string md = report.ToMarkdown();
  EXPECT_NE(md.find("| m | 90.00 | yes | no | no | 90.00 (+0.00) |"),
            std::string::npos)
      << md;
  EXPECT_NE(md.find("|  |  | yes | yes | yes | 90.00 (+0.00) |"),
            std::string::npos)
      << md;
  const std::string csv = report.ToCsv();
  EXPECT_EQ(csv.rfind("model,condition,level,noise,llie,family,", 0), 0u);
  EXPECT_NE(csv.find("m,L5:noise+llie,L5,yes,yes,all,5,10,0,0,50.00,-40.00\n"),
            std::string::npos);
  const auto json = report.ToJson();
  EXPECT_EQ(json["models"]["m"].size(), 21u);
  EXPECT_EQ(json["models"]["m"][0]["condition"], "L0");
}

TEST(ScoreTest, PermutationInvariant) {
  std::vector<EvalRecord> records = Block("a", "L0", 7, 13);
  auto more = Block("a", "L2:noise", 4, 11);
  records.insert(records.end(), more.begin(), more.end());
  more = Block("b", "L0", 2, 9);
  records.insert(records.end(), more.begin(), more.end());
  const std::string expected = Score(records).ToCsv();
  std::mt19937 rng(3);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(records.begin(), records.end(), rng);
    EXPECT_EQ(Score(records).ToCsv(), expected);
  }
}

TEST(ScoreTest, FamilyBreakdownAndCounters) {
  std::vector<EvalRecord> records = Block("m", "L0", 5, 10);
  records[7].failed = true;
  records[8].parsed_index.reset();
  const AccuracyReport report = Score(records);
  const ReportCell& cell = report.table().at("m").at(Condition::Parse("L0"));
  EXPECT_EQ(cell.overall.failed, 1u);
  EXPECT_EQ(cell.overall.unparseable, 1u);
  EXPECT_EQ(cell.by_family.size(), 5u);
  std::size_t sum = 0;
  for (const auto& [family, t] : cell.by_family) sum += t.total;
  EXPECT_EQ(sum, 10u);
  EXPECT_EQ(cell.by_family.at(qa::Family::kRoomType).correct, 1u);  // i = 0
}

TEST(ScoreTest, EmptyAndMixedInputsAreErrors) {
  try {
    Score({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyReport);
  }
  auto records = Block("m", "L0", 1, 2);
  records[1].prompt_version = "mcq/0";
  EXPECT_THROW(Score(records), Error);
  EXPECT_THROW(Score(Block("m", "L0", 1, 2)).Render("xml"), Error);
}

}  // namespace
}  // namespace dimlight::eval
