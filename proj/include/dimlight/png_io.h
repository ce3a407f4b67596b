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

#ifndef DIMLIGHT_PNG_IO_H_
#define DIMLIGHT_PNG_IO_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dimlight/image.h"

namespace dimlight {

// Any decoded PNG, widened to 16-bit samples. Palette and low-bit-depth
// images are expanded; alpha channels are kept.
struct PngPixels {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;  // 8 or 16
  std::vector<std::uint16_t> samples;
};

PngPixels ReadPng(const std::filesystem::path& path);

// RGB or RGBA input is reduced to 8-bit RGB; gray is replicated.
Rgb8Image ReadRgb8Png(const std::filesystem::path& path);
// Single-channel 8- or 16-bit PNG.
Raster<std::uint16_t> ReadGray16Png(const std::filesystem::path& path);

void WriteRgb8Png(const std::filesystem::path& path, const Rgb8Image& image);
void WriteGray16Png(const std::filesystem::path& path,
                    const Raster<std::uint16_t>& raster);

}  // namespace dimlight

#endif  // DIMLIGHT_PNG_IO_H_
