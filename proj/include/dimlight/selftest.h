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

#ifndef DIMLIGHT_SELFTEST_H_
#define DIMLIGHT_SELFTEST_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dimlight/image.h"

namespace dimlight {

// Outcome of one statistical invariant check.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Smooth ramps in all three channels; `variant` picks orientation and range.
SrgbImage SmoothGradient(int width, int height, int variant = 0);
// Band-limited random texture: a few low-frequency sinusoids per channel.
SrgbImage ProceduralScene(int width, int height, std::uint32_t seed);

// PSNR in dB between two equally sized images in [0, 1]; +inf when equal.
double Psnr(const SrgbImage& a, const SrgbImage& b);

// Noise-free L1..L5 variants, quantized to 8 bits as written, must keep
// mean linear intensity at 2^-dEV of the L0 mean within 1% and fall
// strictly with the level.
CheckResult CheckEvLadder(const std::vector<SrgbImage>& images,
                          std::uint64_t seed);

// Poisson mean preservation within 1% over 10^5 sites per (level, K), or
// within 4 standard errors where fewer than ~1.6 electrons per site make
// 1% statistically meaningless.
CheckResult CheckShotNoiseMean(std::uint64_t seed);
// Sample variance against signal: least-squares R^2 above 0.95.
CheckResult CheckShotNoiseVariance(std::uint64_t seed);
// 10^6 draws: |mean| <= 0.002 and variance within 2% of 1/12.
CheckResult CheckQuantizationNoise(std::uint64_t seed);
// One offset per row and variance within 5% of sigma_r^2 over 10^4 rows.
CheckResult CheckRowNoise(std::uint64_t seed);

// render(unprocess(x)) with identity CCM, unit gains, no noise and dEV = 0.
// Tone mapping is skipped on both sides, since the forward ISP has none.
CheckResult CheckRoundTrip(const std::string& name,
                           const std::vector<SrgbImage>& images,
                           double min_psnr_db);

// Every check above on built-in gradients and procedural scenes.
std::vector<CheckResult> RunSelfTest(std::uint64_t seed);

}  // namespace dimlight

#endif  // DIMLIGHT_SELFTEST_H_
