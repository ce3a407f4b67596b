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

#include "dimlight/unprocess.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dimlight/color_space.h"
#include "dimlight/error.h"

namespace dimlight {

double DefaultHighlightCurve(double gray, double inverse_gain) {
  constexpr double kInflection = 0.9;
  const double t = std::max(gray - kInflection, 0.0) / (1.0 - kInflection);
  const double mask = t * t;
  return std::max(mask + (1.0 - mask) * inverse_gain, inverse_gain);
}

double InverseSmoothstep(double x) {
  const double clamped = std::clamp(x, 0.0, 1.0);
  return 0.5 - std::sin(std::asin(1.0 - 2.0 * clamped) / 3.0);
}

double Smoothstep(double x) {
  const double c = std::clamp(x, 0.0, 1.0);
  return c * c * (3.0 - 2.0 * c);
}

BayerRaw Unprocess(const SrgbImage& image, const CameraParams& camera,
                   const UnprocessOptions& options) {
  const int width = image.width();
  const int height = image.height();
  if (width % 2 != 0 || height % 2 != 0) {
    throw Error(ErrorKind::kDimension,
                "unprocessing needs even image dimensions, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  const std::array<double, 3> inverse_gains = {
      1.0 / (camera.wb_gain_red * camera.brightness_gain),
      1.0 / camera.brightness_gain,
      1.0 / (camera.wb_gain_blue * camera.brightness_gain)};

  BayerRaw raw(width / 2, height / 2);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      Eigen::Vector3d rgb;
      for (int c = 0; c < 3; ++c) {
        double v = image.at(x, y, c);
        if (options.inverse_tone_map) v = InverseSmoothstep(v);
        rgb[c] = DecodeGamma(v);
      }
      const Eigen::Vector3d cam = camera.rgb_to_cam * rgb;
      const double gray = cam.mean();
      const int plane = BayerRaw::PlaneAt(x, y);
      const int channel = BayerRaw::ChannelOf(plane);
      const double gain =
          options.highlight_curve(gray, inverse_gains[channel]);
      raw.site(x, y) = std::clamp(cam[channel] * gain, 0.0, 1.0);
    }
  }
  return raw;
}

}  // namespace dimlight
