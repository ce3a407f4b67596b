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

#include "dimlight/png_io.h"

#include <gtest/gtest.h>

#include <fstream>

#include "dimlight/error.h"
#include "support/fs_helpers.h"

namespace dimlight {
namespace {

TEST(PngIoTest, RgbRoundTrip) {
  const auto dir = testing::MakeTempDir("png");
  Rgb8Image image{5, 3, {}};
  for (int i = 0; i < 45; ++i) image.data.push_back(static_cast<std::uint8_t>(i * 5));
  WriteRgb8Png(dir / "a.png", image);
  EXPECT_EQ(ReadRgb8Png(dir / "a.png"), image);
  // Same pixels, same bytes.
  WriteRgb8Png(dir / "b.png", image);
  EXPECT_EQ(testing::ReadFile(dir / "a.png"), testing::ReadFile(dir / "b.png"));
  std::filesystem::remove_all(dir);
}

TEST(PngIoTest, Gray16RoundTrip) {
  const auto dir = testing::MakeTempDir("png16");
  Raster<std::uint16_t> raster(4, 4);
  for (std::size_t i = 0; i < raster.data.size(); ++i) {
    raster.data[i] = static_cast<std::uint16_t>(i * 4000 + 7);
  }
  WriteGray16Png(dir / "d.png", raster);
  const auto back = ReadGray16Png(dir / "d.png");
  EXPECT_EQ(back.width, 4);
  EXPECT_EQ(back.data, raster.data);
  EXPECT_THROW(ReadGray16Png(dir / "missing.png"), Error);
  std::filesystem::remove_all(dir);
}

TEST(PngIoTest, RejectsNonPng) {
  const auto dir = testing::MakeTempDir("pngbad");
  std::ofstream(dir / "x.png") << "definitely not a png";
  try {
    ReadPng(dir / "x.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace dimlight
