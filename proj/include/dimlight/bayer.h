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

#ifndef DIMLIGHT_BAYER_H_
#define DIMLIGHT_BAYER_H_

#include <array>
#include <cstddef>
#include <vector>

namespace dimlight {

// Plane order of an RGGB tile: R at (even row, even col), G1 at (even, odd),
// G2 at (odd, even), B at (odd, odd).
enum BayerPlane { kPlaneR = 0, kPlaneG1 = 1, kPlaneG2 = 2, kPlaneB = 3 };

// Half-resolution four-plane RGGB mosaic. The same type carries normalized
// values in [0,1] and ADU counts; the noise operators document which one they
// expect.
class BayerRaw {
 public:
  BayerRaw() = default;
  BayerRaw(int half_width, int half_height, double fill = 0.0);

  int half_width() const { return half_width_; }
  int half_height() const { return half_height_; }
  int full_width() const { return 2 * half_width_; }
  int full_height() const { return 2 * half_height_; }
  std::size_t plane_size() const {
    return static_cast<std::size_t>(half_width_) * half_height_;
  }

  double& at(int plane, int x, int y) {
    return planes_[plane][static_cast<std::size_t>(y) * half_width_ + x];
  }
  double at(int plane, int x, int y) const {
    return planes_[plane][static_cast<std::size_t>(y) * half_width_ + x];
  }

  // Value at a full-resolution sensor site.
  double site(int x, int y) const {
    return at(PlaneAt(x, y), x / 2, y / 2);
  }
  double& site(int x, int y) { return at(PlaneAt(x, y), x / 2, y / 2); }

  static int PlaneAt(int x, int y) { return (y % 2) * 2 + (x % 2); }
  // Channel (0=R, 1=G, 2=B) sampled by a plane.
  static int ChannelOf(int plane) {
    return plane == kPlaneR ? 0 : (plane == kPlaneB ? 2 : 1);
  }

  std::vector<double>& plane(int p) { return planes_[p]; }
  const std::vector<double>& plane(int p) const { return planes_[p]; }

  template <typename F>
  void ForEachValue(F&& f) {
    for (auto& p : planes_) {
      for (double& v : p) f(v);
    }
  }

  bool operator==(const BayerRaw&) const = default;

 private:
  int half_width_ = 0;
  int half_height_ = 0;
  std::array<std::vector<double>, 4> planes_;
};

}  // namespace dimlight

#endif  // DIMLIGHT_BAYER_H_
