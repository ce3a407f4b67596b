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

#ifndef DIMLIGHT_TESTS_SUPPORT_TEST_IMAGES_H_
#define DIMLIGHT_TESTS_SUPPORT_TEST_IMAGES_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dimlight/image.h"
#include "dimlight/selftest.h"

namespace dimlight::testing {

std::filesystem::path TestDataDir();

using ::dimlight::ProceduralScene;
using ::dimlight::Psnr;
using ::dimlight::SmoothGradient;

// The checked-in photographs under tests/data.
std::vector<std::pair<std::string, SrgbImage>> NaturalImages();
// Natural images followed by procedural scenes, `count` in total.
std::vector<SrgbImage> TestImageSet(int count);

}  // namespace dimlight::testing

#endif  // DIMLIGHT_TESTS_SUPPORT_TEST_IMAGES_H_
