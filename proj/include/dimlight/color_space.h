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

#ifndef DIMLIGHT_COLOR_SPACE_H_
#define DIMLIGHT_COLOR_SPACE_H_

#include "dimlight/image.h"

namespace dimlight {

inline constexpr double kGamma = 2.2;
inline constexpr double kDecodeFloor = 1e-8;

// Exposure reduction in stops. Always non-negative.
class EvDrop {
 public:
  constexpr EvDrop() = default;
  explicit EvDrop(double stops);

  double stops() const { return stops_; }
  // 2^-stops.
  double Scale() const;

 private:
  double stops_ = 0.0;
};

// Pure power-law helpers on scalars.
double DecodeGamma(double srgb);
double EncodeGamma(double linear);

// max(x, 1e-8)^2.2 per channel.
LinearImage DecodeSrgbToLinear(const SrgbImage& image);
// x^(1/2.2) per channel, clamped to [0,1].
SrgbImage EncodeLinearToSrgb(const LinearImage& image);
LinearImage ApplyEvDrop(const LinearImage& image, EvDrop drop);

}  // namespace dimlight

#endif  // DIMLIGHT_COLOR_SPACE_H_
