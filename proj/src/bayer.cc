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

#include "dimlight/bayer.h"

#include <string>

#include "dimlight/error.h"

namespace dimlight {

BayerRaw::BayerRaw(int half_width, int half_height, double fill)
    : half_width_(half_width), half_height_(half_height) {
  if (half_width <= 0 || half_height <= 0) {
    throw Error(ErrorKind::kDimension,
                "mosaic planes must be non-empty, got " +
                    std::to_string(half_width) + "x" +
                    std::to_string(half_height));
  }
  for (auto& p : planes_) p.assign(plane_size(), fill);
}

}  // namespace dimlight
