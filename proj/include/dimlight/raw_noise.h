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

#ifndef DIMLIGHT_RAW_NOISE_H_
#define DIMLIGHT_RAW_NOISE_H_

#include "dimlight/bayer.h"
#include "dimlight/camera.h"
#include "dimlight/seed.h"

namespace dimlight {

// Per-site ADU contributions of each operator, recorded on request.
struct NoiseRealization {
  BayerRaw clean;  // ADU
  BayerRaw shot;
  BayerRaw read;
  BayerRaw row;
  BayerRaw quant;
  BayerRaw composed;  // clean + components, before clamping
};

// Quantile function of the standard Tukey-lambda distribution.
double TukeyLambdaQuantile(double p, double lambda);

// The four operators below act on ADU-domain mosaics and consume `rng`
// in a fixed site order (plane-major, then row-major within a plane).

// Divides by r, converts to electrons via K, draws Poisson counts and scales
// back. Throws kDomain on negative input.
BayerRaw AddShotNoise(BayerRaw raw_adu, const NoiseParams& params,
                      RandomStream& rng);
// i.i.d. Tukey-lambda samples scaled by read_sigma, plus color_bias.
BayerRaw AddReadNoise(BayerRaw raw_adu, const NoiseParams& params,
                      RandomStream& rng);
// One N(0, row_sigma^2) offset per full-resolution sensor row.
BayerRaw AddRowNoise(BayerRaw raw_adu, const NoiseParams& params,
                     RandomStream& rng);
// i.i.d. U(-0.5, 0.5) ADU.
BayerRaw AddQuantNoise(BayerRaw raw_adu, RandomStream& rng);

// Normalized -> ADU, shot -> read -> row -> quant (each only if enabled in
// params.components), clamp to [0, white_level], back to normalized.
BayerRaw InjectNoise(const BayerRaw& raw, const CameraParams& camera,
                     const NoiseParams& noise, RandomStream& rng,
                     NoiseRealization* diagnostics = nullptr);

}  // namespace dimlight

#endif  // DIMLIGHT_RAW_NOISE_H_
