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

#include "dimlight/isp.h"

#include <algorithm>
#include <array>

#include "dimlight/unprocess.h"

namespace dimlight {
namespace {

int Reflect(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return i;
}

}  // namespace

LinearImage DemosaicBilinear(const BayerRaw& raw) {
  const int width = raw.full_width();
  const int height = raw.full_height();
  LinearImage out(width, height);
  auto sample = [&](int x, int y) {
    return raw.site(Reflect(x, width), Reflect(y, height));
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int plane = BayerRaw::PlaneAt(x, y);
      const double center = sample(x, y);
      const double cross = 0.25 * (sample(x - 1, y) + sample(x + 1, y) +
                                   sample(x, y - 1) + sample(x, y + 1));
      const double diagonal =
          0.25 * (sample(x - 1, y - 1) + sample(x + 1, y - 1) +
                  sample(x - 1, y + 1) + sample(x + 1, y + 1));
      const double horizontal = 0.5 * (sample(x - 1, y) + sample(x + 1, y));
      const double vertical = 0.5 * (sample(x, y - 1) + sample(x, y + 1));
      double r = 0.0, g = 0.0, b = 0.0;
      switch (plane) {
        case kPlaneR:
          r = center, g = cross, b = diagonal;
          break;
        case kPlaneB:
          r = diagonal, g = cross, b = center;
          break;
        case kPlaneG1:  // red row
          r = horizontal, g = center, b = vertical;
          break;
        case kPlaneG2:  // blue row
          r = vertical, g = center, b = horizontal;
          break;
      }
      out.at(x, y, 0) = r;
      out.at(x, y, 1) = g;
      out.at(x, y, 2) = b;
    }
  }
  return out;
}

SrgbImage Render(const BayerRaw& raw, const CameraParams& camera, EvDrop drop,
                 const RenderOptions& options) {
  const std::array<double, 4> plane_gains = {
      camera.wb_gain_red * camera.brightness_gain, camera.brightness_gain,
      camera.brightness_gain, camera.wb_gain_blue * camera.brightness_gain};
  BayerRaw balanced = raw;
  for (int p = 0; p < 4; ++p) {
    for (double& v : balanced.plane(p)) {
      v = std::clamp(v * plane_gains[p], 0.0, 1.0);
    }
  }

  const LinearImage camera_rgb = DemosaicBilinear(balanced);
  const double exposure = drop.Scale();
  SrgbImage out(camera_rgb.width(), camera_rgb.height());
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const Eigen::Vector3d cam(camera_rgb.at(x, y, 0), camera_rgb.at(x, y, 1),
                                camera_rgb.at(x, y, 2));
      const Eigen::Vector3d rgb = camera.cam_to_rgb * cam;
      for (int c = 0; c < 3; ++c) {
        const double linear = std::clamp(rgb[c], 0.0, 1.0) * exposure;
        double encoded = EncodeGamma(linear);
        if (options.tone_map) encoded = Smoothstep(encoded);
        out.at(x, y, c) = QuantizeUnitTo8Bit(encoded) / 255.0;
      }
    }
  }
  return out;
}

}  // namespace dimlight
