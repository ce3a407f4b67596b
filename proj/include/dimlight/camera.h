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

#ifndef DIMLIGHT_CAMERA_H_
#define DIMLIGHT_CAMERA_H_

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dimlight {

using Matrix3 = Eigen::Matrix3d;

// Sampled ISP parameters shared by unprocessing and the forward render.
struct CameraParams {
  Matrix3 rgb_to_cam = Matrix3::Identity();
  Matrix3 cam_to_rgb = Matrix3::Identity();
  double wb_gain_red = 1.0;
  double wb_gain_blue = 1.0;
  // Forward (render-side) brightness gain; unprocessing divides by it.
  double brightness_gain = 1.0;
  int white_level = 16383;
  std::uint64_t seed_tag = 0;

  // Identity color matrices and unit gains.
  static CameraParams Identity(int white_level = 16383);
  // Throws kConfig if a stored invariant does not hold.
  void Validate() const;
};

// Which of the four noise operators inject_noise applies.
struct NoiseComponents {
  bool shot = true;
  bool read = true;
  bool row = true;
  bool quant = true;

  static constexpr NoiseComponents None() { return {false, false, false, false}; }
};

struct NoiseParams {
  double system_gain_k = 1.0;
  double iso_ratio_r = 100.0;

  // log(sigma_tl) = read_slope * log(K) + read_intercept + eps
  double read_slope = 0.0;
  double read_intercept = 0.0;
  double read_residual_sigma = 0.0;
  double read_sigma = 0.0;  // sigma_tl for this draw, in ADU

  // log(sigma_r) = row_slope * log(K) + row_intercept + eps
  double row_slope = 0.0;
  double row_intercept = 0.0;
  double row_residual_sigma = 0.0;
  double row_sigma = 0.0;  // sigma_r for this draw, in ADU

  double tukey_lambda = 0.0;
  std::array<double, 4> color_bias{};  // ADU, per R/G1/G2/B plane

  NoiseComponents components;
};

// Named calibration for the read and row noise laws. Stored as key = value
// text so profiles can be swapped without rebuilding.
struct SensorProfile {
  std::string name = "generic-14bit";
  double read_slope = 0.85;
  double read_intercept = 0.40;
  double read_residual_sigma = 0.025;
  double row_slope = 0.88;
  double row_intercept = -2.1;
  double row_residual_sigma = 0.03;
  double tukey_lambda = -0.12;
  std::array<double, 4> color_bias{0.15, 0.05, 0.05, 0.20};
  int white_level = 16383;

  static SensorProfile Parse(std::string_view text);
  static SensorProfile Load(const std::filesystem::path& path);
  std::string Serialize() const;
};

struct Range {
  double min = 0.0;
  double max = 0.0;
};

struct SamplingConfig {
  Range system_gain{0.1, 6.0};  // sampled log-uniformly
  Range iso_ratio{100.0, 300.0};
  Range red_gain{1.9, 2.4};
  Range blue_gain{1.5, 1.9};
  // Reciprocal of the brightness gain is drawn from a clipped normal.
  double brightness_scale_mean = 0.8;
  double brightness_scale_std = 0.1;
  Range brightness_scale_clip{0.5, 1.0};
  // xyz->camera matrices; the rgb->camera matrix is a random convex
  // combination of these composed with sRGB->XYZ.
  std::vector<Matrix3> xyz_to_cam_bank;
  SensorProfile profile;

  // Throws kConfig on inverted or degenerate ranges.
  void Validate() const;
};

// Bank of four xyz->camera matrices shipped with the project.
std::vector<Matrix3> DefaultColorMatrixBank();
// Nine whitespace-separated numbers per matrix, row-major; '#' comments.
std::vector<Matrix3> ParseColorMatrixBank(std::string_view text);
std::vector<Matrix3> LoadColorMatrixBank(const std::filesystem::path& path);

// Composes xyz->cam with linear sRGB->XYZ (D65) and normalizes rows to one.
Matrix3 RgbToCamFromXyzToCam(const Matrix3& xyz_to_cam);

// Draws camera and noise parameters from `seed`. When `severity_quantile` is
// set (ladder-coupled mode), K and r are pinned to that quantile of their
// ranges instead of being sampled; K's quantile is taken in log space.
std::pair<CameraParams, NoiseParams> SampleCameraParams(
    std::uint64_t seed, const SamplingConfig& config,
    std::optional<double> severity_quantile = std::nullopt);

}  // namespace dimlight

#endif  // DIMLIGHT_CAMERA_H_
