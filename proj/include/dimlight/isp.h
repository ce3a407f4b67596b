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

#ifndef DIMLIGHT_ISP_H_
#define DIMLIGHT_ISP_H_

#include "dimlight/bayer.h"
#include "dimlight/camera.h"
#include "dimlight/color_space.h"
#include "dimlight/image.h"

namespace dimlight {

struct RenderOptions {
  // Re-apply the smoothstep tone curve after gamma compression. Off by
  // default; the simplified ISP has no tone-mapping stage, so render is only
  // an exact inverse of Unprocess when both sides agree on this flag.
  bool tone_map = false;
};

// Bilinear RGGB demosaic with mirror (reflect-101) borders. Output is
// full resolution camera RGB.
LinearImage DemosaicBilinear(const BayerRaw& raw);

// RAW -> 8-bit sRGB: white balance, bilinear demosaic, cam->rgb CCM,
// 2^-dEV exposure scaling, gamma 1/2.2, clamp and 8-bit quantization. The
// returned image holds exact multiples of 1/255.
SrgbImage Render(const BayerRaw& raw, const CameraParams& camera, EvDrop drop,
                 const RenderOptions& options = {});

}  // namespace dimlight

#endif  // DIMLIGHT_ISP_H_
