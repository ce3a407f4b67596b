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

#include "dimlight/image.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dimlight/error.h"

namespace dimlight {

RgbBuffer::RgbBuffer(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::kDimension,
                "image dimensions must be positive, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  data_.assign(pixel_count() * 3, fill);
}

SrgbImage::SrgbImage(RgbBuffer buffer) : buffer_(std::move(buffer)) {}

std::uint8_t QuantizeUnitTo8Bit(double value) {
  const double clamped = std::clamp(value, 0.0, 1.0);
  // std::lround rounds half away from zero.
  return static_cast<std::uint8_t>(std::lround(clamped * 255.0));
}

SrgbImage SrgbImage::FromBytes(const Rgb8Image& bytes) {
  SrgbImage image(bytes.width, bytes.height);
  auto out = image.values();
  for (std::size_t i = 0; i < bytes.data.size(); ++i) {
    out[i] = bytes.data[i] / 255.0;
  }
  return image;
}

Rgb8Image SrgbImage::ToBytes() const {
  Rgb8Image bytes;
  bytes.width = width();
  bytes.height = height();
  const auto in = values();
  bytes.data.resize(in.size());
  std::transform(in.begin(), in.end(), bytes.data.begin(), QuantizeUnitTo8Bit);
  return bytes;
}

double LinearImage::MeanIntensity() const {
  const auto v = values();
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

}  // namespace dimlight
