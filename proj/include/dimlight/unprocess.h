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

#ifndef DIMLIGHT_UNPROCESS_H_
#define DIMLIGHT_UNPROCESS_H_

#include <functional>

#include "dimlight/bayer.h"
#include "dimlight/camera.h"
#include "dimlight/image.h"

namespace dimlight {

// Maps (pixel gray level, inverse gain) to the gain actually applied.
using HighlightCurve = std::function<double(double gray, double inverse_gain)>;

// Blends the inverse gain toward 1 as gray rises above 0.9 (quadratic ramp),
// never going below the plain inverse gain.
double DefaultHighlightCurve(double gray, double inverse_gain);

// Inverse of the smoothstep tone curve 3x^2 - 2x^3 on [0,1].
double InverseSmoothstep(double x);
double Smoothstep(double x);

struct UnprocessOptions {
  bool inverse_tone_map = true;
  HighlightCurve highlight_curve = DefaultHighlightCurve;
};

// sRGB -> camera-linear RGGB mosaic: inverse tone map, gamma expansion,
// rgb->camera CCM, gain inversion with highlight preservation, mosaic
// extraction. Throws kDimension for odd image sizes.
BayerRaw Unprocess(const SrgbImage& image, const CameraParams& camera,
                   const UnprocessOptions& options = {});

}  // namespace dimlight

#endif  // DIMLIGHT_UNPROCESS_H_
