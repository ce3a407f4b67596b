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

#include "dimlight/degrade.h"

#include <gtest/gtest.h>

#include <fstream>
#include <nlohmann/json.hpp>

#include "dimlight/error.h"
#include "dimlight/png_io.h"
#include "support/fs_helpers.h"
#include "support/test_images.h"

namespace dimlight {
namespace {

TEST(LevelTest, LadderMapping) {
  EXPECT_EQ(LevelToEv(DegradationLevel(0)).stops(), 0.0);
  EXPECT_EQ(LevelToEv(DegradationLevel(1)).stops(), 2.0);
  EXPECT_EQ(LevelToEv(DegradationLevel(2)).stops(), 4.0);
  EXPECT_EQ(LevelToEv(DegradationLevel(3)).stops(), 6.0);
  EXPECT_EQ(LevelToEv(DegradationLevel(4)).stops(), 7.5);
  EXPECT_EQ(LevelToEv(DegradationLevel(5)).stops(), 9.0);
  EXPECT_THROW(DegradationLevel(6), Error);
}

TEST(LevelTest, ParsesListsAndRanges) {
  auto names = [](const std::vector<DegradationLevel>& levels) {
    std::string out;
    for (auto l : levels) out += l.name();
    return out;
  };
  EXPECT_EQ(names(DegradationLevel::ParseList("L1..L5")), "L1L2L3L4L5");
  EXPECT_EQ(names(DegradationLevel::ParseList("L5,L1")), "L1L5");
  EXPECT_EQ(names(DegradationLevel::ParseList("L0,L2-L3,l3")), "L0L2L3");
  EXPECT_THROW(DegradationLevel::ParseList("L3..L1"), Error);
  EXPECT_THROW(DegradationLevel::ParseList("X1"), Error);
  EXPECT_THROW(DegradationLevel::ParseList(""), Error);
}

TEST(SynthesizePairTest, LevelZeroReturnsOriginalTwice) {
  const SrgbImage image = testing::ProceduralScene(32, 16, 5);
  const auto pair = SynthesizePair(image, DegradationLevel(0), 7, "s", "f", {});
  EXPECT_EQ(pair.noise_free.ToBytes(), image.ToBytes());
  EXPECT_EQ(pair.noisy.ToBytes(), image.ToBytes());
}

TEST(SynthesizePairTest, NoiseFreeMeanScalesWithLadder) {
  const SrgbImage image = testing::ProceduralScene(64, 48, 9);
  const Rgb8Image source = image.ToBytes();
  const double base =
      DecodeSrgbToLinear(SrgbImage::FromBytes(source)).MeanIntensity();
  double previous = base;
  for (int level = 1; level <= 5; ++level) {
    const auto pair = SynthesizePair(SrgbImage::FromBytes(source),
                                     DegradationLevel(level), 1, "s", "f", {});
    const double mean =
        DecodeSrgbToLinear(SrgbImage::FromBytes(pair.noise_free.ToBytes()))
            .MeanIntensity();
    const double expected = base * DegradationLevel(level).ev().Scale();
    EXPECT_NEAR(mean, expected, 0.01 * expected) << "L" << level;
    EXPECT_LT(mean, previous);
    previous = mean;
  }
}

TEST(SynthesizePairTest, NoisyBranchIsDeterministicPerKey) {
  const SrgbImage image = testing::ProceduralScene(32, 32, 2);
  const PipelineConfig config;
  const auto a = SynthesizePair(image, DegradationLevel(3), 11, "scene", "f1", config);
  const auto b = SynthesizePair(image, DegradationLevel(3), 11, "scene", "f1", config);
  const auto other_frame =
      SynthesizePair(image, DegradationLevel(3), 11, "scene", "f2", config);
  const auto other_level =
      SynthesizePair(image, DegradationLevel(4), 11, "scene", "f1", config);
  EXPECT_EQ(a.noisy.ToBytes(), b.noisy.ToBytes());
  EXPECT_NE(a.frame_seed, other_frame.frame_seed);
  EXPECT_NE(a.frame_seed, other_level.frame_seed);
  EXPECT_NE(a.noisy.ToBytes(), other_frame.noisy.ToBytes());
}

TEST(SynthesizePairTest, LadderCouplingUsesLevelQuantile) {
  PipelineConfig config;
  config.ladder_coupled = true;
  const SrgbImage image(8, 8, 0.5);
  const auto l1 = SynthesizePair(image, DegradationLevel(1), 3, "s", "f", config);
  const auto l5 = SynthesizePair(image, DegradationLevel(5), 3, "s", "f", config);
  EXPECT_NEAR(l1.noise->iso_ratio_r, 120.0, 1e-9);
  EXPECT_NEAR(l5.noise->iso_ratio_r, 280.0, 1e-9);
  EXPECT_LT(l1.noise->system_gain_k, l5.noise->system_gain_k);
}

class ProcessDatasetTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::MakeTempDir("degrade");
    std::ofstream manifest(dir_ / "m.jsonl");
    for (int s = 0; s < 2; ++s) {
      for (int f = 0; f < 3; ++f) {
        const std::string name = "img" + std::to_string(s) + std::to_string(f) + ".png";
        WriteRgb8Png(dir_ / name,
                     testing::ProceduralScene(24, 16, s * 10 + f).ToBytes());
        manifest << nlohmann::json{{"scene", "scene" + std::to_string(s)},
                                   {"frame", "f" + std::to_string(f)},
                                   {"rgb", name}}
                        .dump()
                 << "\n";
      }
    }
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::filesystem::path dir_;
};

TEST_F(ProcessDatasetTest, WritesPairedVariantsWithSidecars) {
  const auto manifest = DatasetManifest::Load(dir_ / "m.jsonl");
  const auto levels = DegradationLevel::ParseList("L1,L5");
  const RunReport report =
      ProcessDataset(manifest, levels, dir_ / "out", {}, {.global_seed = 7});
  EXPECT_EQ(report.images_written, 2u * 3 * 2 * 2);
  EXPECT_TRUE(report.failures.empty());
  EXPECT_EQ(testing::CountFiles(dir_ / "out", ".png"), 24u);

  const auto path = VariantPath(dir_ / "out", "scene1", "f2", DegradationLevel(5),
                                Variant::kNoisy);
  ASSERT_TRUE(std::filesystem::exists(path));
  std::ifstream sidecar(std::filesystem::path(path).replace_extension(".json"));
  const auto meta = nlohmann::json::parse(sidecar);
  EXPECT_EQ(meta["level"], "L5");
  EXPECT_EQ(meta["delta_ev"], 9.0);
  EXPECT_EQ(meta["variant"], "noisy");
  EXPECT_EQ(meta["profile"], "generic-14bit");
  EXPECT_EQ(meta["global_seed"], 7);
}

TEST_F(ProcessDatasetTest, RerunAndJobCountDoNotChangeBytes) {
  const auto manifest = DatasetManifest::Load(dir_ / "m.jsonl");
  const auto levels = DegradationLevel::ParseList("L0,L2,L4");
  ProcessDataset(manifest, levels, dir_ / "a", {}, {.global_seed = 5, .jobs = 1});
  ProcessDataset(manifest, levels, dir_ / "b", {}, {.global_seed = 5, .jobs = 3});
  EXPECT_EQ(testing::HashTree(dir_ / "a"), testing::HashTree(dir_ / "b"));
  ProcessDataset(manifest, levels, dir_ / "c", {}, {.global_seed = 6, .jobs = 2});
  EXPECT_NE(testing::HashTree(dir_ / "a"), testing::HashTree(dir_ / "c"));
}

TEST_F(ProcessDatasetTest, OriginalLevelIsMaterialized) {
  const auto manifest = DatasetManifest::Load(dir_ / "m.jsonl");
  ProcessDataset(manifest, DegradationLevel::ParseList("L0"), dir_ / "out", {}, {});
  const auto copy = ReadRgb8Png(
      VariantPath(dir_ / "out", "scene0", "f1", DegradationLevel(0), Variant::kOriginal));
  EXPECT_EQ(copy, ReadRgb8Png(dir_ / "img01.png"));
}

TEST_F(ProcessDatasetTest, BadFrameIsRecordedAndRunContinues) {
  // Odd width: the noisy branch cannot unprocess it.
  WriteRgb8Png(dir_ / "img01.png", testing::ProceduralScene(25, 16, 1).ToBytes());
  const auto manifest = DatasetManifest::Load(dir_ / "m.jsonl");
  const RunReport report = ProcessDataset(
      manifest, DegradationLevel::ParseList("L1"), dir_ / "out", {}, {});
  ASSERT_EQ(report.failures.size(), 1u);
  EXPECT_EQ(report.failures[0].scene, "scene0");
  EXPECT_EQ(report.failures[0].frame, "f1");
  EXPECT_EQ(report.frames_processed, 5u);
}

TEST_F(ProcessDatasetTest, UnwritableOutputAborts) {
  std::ofstream(dir_ / "blocker") << "x";
  const auto manifest = DatasetManifest::Load(dir_ / "m.jsonl");
  try {
    ProcessDataset(manifest, DegradationLevel::ParseList("L1"),
                   dir_ / "blocker" / "out", {}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

TEST(ManifestTest, RejectsDuplicatesAndMissingFields) {
  EXPECT_THROW(DatasetManifest::Parse(
                   R"({"scene":"a","frame":"1","rgb":"x.png"}
{"scene":"a","frame":"1","rgb":"y.png"})",
                   "."),
               Error);
  EXPECT_THROW(DatasetManifest::Parse(R"({"scene":"a","rgb":"x.png"})", "."), Error);
  EXPECT_THROW(DatasetManifest::Parse(R"({"scene":"../a","frame":"1","rgb":"x"})", "."),
               Error);
  const auto ok = DatasetManifest::Parse(
      R"({"scene":"a","frame":"1","rgb":"x.png"}
{"scene":"b","frame":"1","rgb":"/abs/y.png"})",
      "/base");
  EXPECT_EQ(ok.frames()[0].rgb, std::filesystem::path("/base/x.png"));
  EXPECT_EQ(ok.frames()[1].rgb, std::filesystem::path("/abs/y.png"));
  EXPECT_EQ(ok.scenes().size(), 2u);
}

TEST(ManifestTest, MissingAssetFailsAtLoad) {
  const auto dir = testing::MakeTempDir("manifest");
  std::ofstream(dir / "m.jsonl") << R"({"scene":"a","frame":"1","rgb":"nope.png"})";
  EXPECT_THROW(DatasetManifest::Load(dir / "m.jsonl"), Error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace dimlight
