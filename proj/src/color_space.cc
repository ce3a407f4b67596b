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

#include "dimlight/color_space.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dimlight/error.h"

namespace dimlight {

EvDrop::EvDrop(double stops) : stops_(stops) {
  if (!(stops >= 0.0) || !std::isfinite(stops)) {
    throw Error(ErrorKind::kDomain,
                "EV drop must be a finite non-negative number of stops, got " +
                    std::to_string(stops));
  }
}

double EvDrop::Scale() const { return std::exp2(-stops_); }

double DecodeGamma(double srgb) {
  return std::pow(std::max(srgb, kDecodeFloor), kGamma);
}

double EncodeGamma(double linear) {
  return std::pow(std::max(linear, 0.0), 1.0 / kGamma);
}

LinearImage DecodeSrgbToLinear(const SrgbImage& image) {
  LinearImage out(image.width(), image.height());
  std::ranges::transform(image.values(), out.values().begin(), DecodeGamma);
  return out;
}

SrgbImage EncodeLinearToSrgb(const LinearImage& image) {
  SrgbImage out(image.width(), image.height());
  std::ranges::transform(image.values(), out.values().begin(), [](double v) {
    return std::clamp(EncodeGamma(v), 0.0, 1.0);
  });
  return out;
}

LinearImage ApplyEvDrop(const LinearImage& image, EvDrop drop) {
  LinearImage out = image;
  const double scale = drop.Scale();
  for (double& v : out.values()) v *= scale;
  return out;
}

}  // namespace dimlight
