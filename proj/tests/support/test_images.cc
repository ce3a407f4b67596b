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

#include "support/test_images.h"

#include "dimlight/png_io.h"

namespace dimlight::testing {

std::filesystem::path TestDataDir() { return DIMLIGHT_TEST_DATA_DIR; }

std::vector<std::pair<std::string, SrgbImage>> NaturalImages() {
  std::vector<std::pair<std::string, SrgbImage>> out;
  for (const char* name : {"astronaut", "coffee", "chelsea", "rocket"}) {
    out.emplace_back(name, SrgbImage::FromBytes(ReadRgb8Png(
                               TestDataDir() / (std::string(name) + ".png"))));
  }
  return out;
}

std::vector<SrgbImage> TestImageSet(int count) {
  std::vector<SrgbImage> out;
  for (auto& [name, image] : NaturalImages()) {
    if (static_cast<int>(out.size()) == count) break;
    out.push_back(std::move(image));
  }
  for (std::uint32_t seed = 1; static_cast<int>(out.size()) < count; ++seed) {
    out.push_back(seed % 4 == 0 ? SmoothGradient(96, 64, seed)
                                : ProceduralScene(96, 64, seed));
  }
  return out;
}

}  // namespace dimlight::testing
