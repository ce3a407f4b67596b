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

#ifndef DIMLIGHT_IMAGE_H_
#define DIMLIGHT_IMAGE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dimlight {

// Interleaved three-channel floating-point raster. SrgbImage and LinearImage
// wrap it so the two encodings cannot be mixed up at call sites.
class RgbBuffer {
 public:
  RgbBuffer() = default;
  RgbBuffer(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }
  bool empty() const { return data_.empty(); }

  double& at(int x, int y, int c) { return data_[Index(x, y, c)]; }
  double at(int x, int y, int c) const { return data_[Index(x, y, c)]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const RgbBuffer&) const = default;

 private:
  std::size_t Index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 3 + c;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

// 8-bit interleaved RGB, the file-boundary representation.
struct Rgb8Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  std::uint8_t at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  bool operator==(const Rgb8Image&) const = default;
};

// Display-referred sRGB values in [0, 1].
class SrgbImage {
 public:
  SrgbImage() = default;
  SrgbImage(int width, int height, double fill = 0.0)
      : buffer_(width, height, fill) {}
  explicit SrgbImage(RgbBuffer buffer);

  static SrgbImage FromBytes(const Rgb8Image& bytes);
  // Clamps to [0,1] and rounds value*255 half away from zero.
  Rgb8Image ToBytes() const;

  int width() const { return buffer_.width(); }
  int height() const { return buffer_.height(); }
  double& at(int x, int y, int c) { return buffer_.at(x, y, c); }
  double at(int x, int y, int c) const { return buffer_.at(x, y, c); }
  std::span<double> values() { return buffer_.values(); }
  std::span<const double> values() const { return buffer_.values(); }
  const RgbBuffer& buffer() const { return buffer_; }

  bool operator==(const SrgbImage&) const = default;

 private:
  RgbBuffer buffer_;
};

// Scene-linear RGB values, non-negative.
class LinearImage {
 public:
  LinearImage() = default;
  LinearImage(int width, int height, double fill = 0.0)
      : buffer_(width, height, fill) {}
  explicit LinearImage(RgbBuffer buffer) : buffer_(std::move(buffer)) {}

  int width() const { return buffer_.width(); }
  int height() const { return buffer_.height(); }
  double& at(int x, int y, int c) { return buffer_.at(x, y, c); }
  double at(int x, int y, int c) const { return buffer_.at(x, y, c); }
  std::span<double> values() { return buffer_.values(); }
  std::span<const double> values() const { return buffer_.values(); }

  double MeanIntensity() const;

  bool operator==(const LinearImage&) const = default;

 private:
  RgbBuffer buffer_;
};

std::uint8_t QuantizeUnitTo8Bit(double value);

// Single-channel raster used for depth and id maps.
template <typename T>
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Raster() = default;
  Raster(int w, int h, T fill = T{})
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  T at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
};

}  // namespace dimlight

#endif  // DIMLIGHT_IMAGE_H_
