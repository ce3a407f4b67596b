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

#include "dimlight/camera.h"

#include <Eigen/LU>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dimlight/error.h"
#include "dimlight/seed.h"

namespace dimlight {
namespace {

void CheckRange(const Range& range, const char* name, bool positive) {
  if (!(range.min <= range.max) || !std::isfinite(range.min) ||
      !std::isfinite(range.max)) {
    throw Error(ErrorKind::kConfig, std::string("range ") + name +
                                        " is inverted or not finite");
  }
  if (positive && range.min <= 0.0) {
    throw Error(ErrorKind::kConfig,
                std::string("range ") + name + " must be strictly positive");
  }
}

std::string Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

double ParseNumber(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::kConfig,
                "profile key '" + key + "' has non-numeric value '" + value +
                    "'");
  }
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CameraParams CameraParams::Identity(int white_level) {
  CameraParams params;
  params.white_level = white_level;
  return params;
}

void CameraParams::Validate() const {
  for (int r = 0; r < 3; ++r) {
    if (std::abs(rgb_to_cam.row(r).sum() - 1.0) > 1e-6) {
      throw Error(ErrorKind::kConfig, "rgb_to_cam rows must sum to 1");
    }
  }
  if (!(cam_to_rgb * rgb_to_cam).isApprox(Matrix3::Identity(), 1e-5)) {
    throw Error(ErrorKind::kConfig, "cam_to_rgb is not the inverse of rgb_to_cam");
  }
  if (!(wb_gain_red > 0 && wb_gain_blue > 0 && brightness_gain > 0)) {
    throw Error(ErrorKind::kConfig, "camera gains must be positive");
  }
  if (white_level <= 0) {
    throw Error(ErrorKind::kConfig, "white_level must be positive");
  }
}

SensorProfile SensorProfile::Parse(std::string_view text) {
  SensorProfile profile;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kConfig, "profile line " + std::to_string(line_no) +
                                          ": expected key = value");
    }
    const std::string key = Trim(std::string_view(line).substr(0, eq));
    const std::string value = Trim(std::string_view(line).substr(eq + 1));
    if (key == "name") {
      profile.name = value;
    } else if (key == "read_slope") {
      profile.read_slope = ParseNumber(key, value);
    } else if (key == "read_intercept") {
      profile.read_intercept = ParseNumber(key, value);
    } else if (key == "read_residual_sigma") {
      profile.read_residual_sigma = ParseNumber(key, value);
    } else if (key == "row_slope") {
      profile.row_slope = ParseNumber(key, value);
    } else if (key == "row_intercept") {
      profile.row_intercept = ParseNumber(key, value);
    } else if (key == "row_residual_sigma") {
      profile.row_residual_sigma = ParseNumber(key, value);
    } else if (key == "tukey_lambda") {
      profile.tukey_lambda = ParseNumber(key, value);
    } else if (key == "white_level") {
      profile.white_level = static_cast<int>(ParseNumber(key, value));
    } else if (key == "color_bias") {
      std::istringstream values(value);
      std::string token;
      for (double& bias : profile.color_bias) {
        if (!(values >> token)) {
          throw Error(ErrorKind::kConfig, "color_bias needs four values");
        }
        bias = ParseNumber(key, token);
      }
      if (values >> token) {
        throw Error(ErrorKind::kConfig, "color_bias needs four values");
      }
    } else {
      throw Error(ErrorKind::kConfig, "unknown profile key '" + key + "'");
    }
  }
  if (profile.white_level <= 0) {
    throw Error(ErrorKind::kConfig, "white_level must be positive");
  }
  return profile;
}

SensorProfile SensorProfile::Load(const std::filesystem::path& path) {
  return Parse(ReadFile(path));
}

std::string SensorProfile::Serialize() const {
  std::ostringstream out;
  out.precision(17);
  out << "name = " << name << "\n"
      << "read_slope = " << read_slope << "\n"
      << "read_intercept = " << read_intercept << "\n"
      << "read_residual_sigma = " << read_residual_sigma << "\n"
      << "row_slope = " << row_slope << "\n"
      << "row_intercept = " << row_intercept << "\n"
      << "row_residual_sigma = " << row_residual_sigma << "\n"
      << "tukey_lambda = " << tukey_lambda << "\n"
      << "color_bias = " << color_bias[0] << " " << color_bias[1] << " "
      << color_bias[2] << " " << color_bias[3] << "\n"
      << "white_level = " << white_level << "\n";
  return out.str();
}

void SamplingConfig::Validate() const {
  CheckRange(system_gain, "system_gain", true);
  CheckRange(iso_ratio, "iso_ratio", true);
  CheckRange(red_gain, "red_gain", true);
  CheckRange(blue_gain, "blue_gain", true);
  CheckRange(brightness_scale_clip, "brightness_scale_clip", true);
  if (brightness_scale_std < 0.0) {
    throw Error(ErrorKind::kConfig, "brightness_scale_std must be >= 0");
  }
  if (profile.white_level <= 0) {
    throw Error(ErrorKind::kConfig, "white_level must be positive");
  }
}

std::vector<Matrix3> DefaultColorMatrixBank() {
  std::vector<Matrix3> bank(4);
  bank[0] << 1.0234, -0.2969, -0.2266,
             -0.5625, 1.6328, -0.0469,
             -0.0703, 0.2188, 0.6406;
  bank[1] << 0.4913, -0.0541, -0.0202,
             -0.6130, 1.3513, 0.2906,
             -0.1564, 0.2151, 0.7183;
  bank[2] << 0.8380, -0.2630, -0.0639,
             -0.2887, 1.0725, 0.2496,
             -0.0627, 0.1427, 0.5438;
  bank[3] << 0.6596, -0.2079, -0.0562,
             -0.4782, 1.3016, 0.1933,
             -0.0970, 0.1581, 0.5181;
  return bank;
}

std::vector<Matrix3> ParseColorMatrixBank(std::string_view text) {
  std::vector<double> numbers;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream tokens(line);
    std::string token;
    while (tokens >> token) numbers.push_back(ParseNumber("matrix", token));
  }
  if (numbers.empty() || numbers.size() % 9 != 0) {
    throw Error(ErrorKind::kConfig,
                "color matrix bank must hold a positive multiple of 9 values");
  }
  std::vector<Matrix3> bank(numbers.size() / 9);
  for (std::size_t m = 0; m < bank.size(); ++m) {
    for (int i = 0; i < 9; ++i) bank[m](i / 3, i % 3) = numbers[m * 9 + i];
  }
  return bank;
}

std::vector<Matrix3> LoadColorMatrixBank(const std::filesystem::path& path) {
  return ParseColorMatrixBank(ReadFile(path));
}

Matrix3 RgbToCamFromXyzToCam(const Matrix3& xyz_to_cam) {
  Matrix3 rgb_to_xyz;
  rgb_to_xyz << 0.4124564, 0.3575761, 0.1804375,
                0.2126729, 0.7151522, 0.0721750,
                0.0193339, 0.1191920, 0.9503041;
  Matrix3 rgb_to_cam = xyz_to_cam * rgb_to_xyz;
  for (int r = 0; r < 3; ++r) rgb_to_cam.row(r) /= rgb_to_cam.row(r).sum();
  return rgb_to_cam;
}

std::pair<CameraParams, NoiseParams> SampleCameraParams(
    std::uint64_t seed, const SamplingConfig& config,
    std::optional<double> severity_quantile) {
  config.Validate();
  if (severity_quantile && !(*severity_quantile >= 0.0 &&
                             *severity_quantile <= 1.0)) {
    throw Error(ErrorKind::kConfig, "severity quantile must lie in [0, 1]");
  }
  RandomStream rng(seed);
  using Uniform = boost::random::uniform_real_distribution<double>;
  using Normal = boost::random::normal_distribution<double>;

  CameraParams camera;
  camera.seed_tag = seed;
  camera.white_level = config.profile.white_level;

  const std::vector<Matrix3> bank = config.xyz_to_cam_bank.empty()
                                        ? DefaultColorMatrixBank()
                                        : config.xyz_to_cam_bank;
  Matrix3 xyz_to_cam = Matrix3::Zero();
  double weight_sum = 0.0;
  for (const Matrix3& m : bank) {
    const double w = Uniform(1e-8, 1e8)(rng);
    xyz_to_cam += w * m;
    weight_sum += w;
  }
  xyz_to_cam /= weight_sum;
  camera.rgb_to_cam = RgbToCamFromXyzToCam(xyz_to_cam);
  camera.cam_to_rgb = camera.rgb_to_cam.inverse();

  const double scale = std::clamp(
      Normal(config.brightness_scale_mean, config.brightness_scale_std)(rng),
      config.brightness_scale_clip.min, config.brightness_scale_clip.max);
  camera.brightness_gain = 1.0 / scale;
  camera.wb_gain_red = Uniform(config.red_gain.min, config.red_gain.max)(rng);
  camera.wb_gain_blue = Uniform(config.blue_gain.min, config.blue_gain.max)(rng);

  NoiseParams noise;
  const double log_k_min = std::log(config.system_gain.min);
  const double log_k_max = std::log(config.system_gain.max);
  // Both draws are consumed in either mode so the rest of the stream does not
  // depend on the coupling choice.
  const double k_draw = Uniform(0.0, 1.0)(rng);
  const double r_draw = Uniform(0.0, 1.0)(rng);
  const double k_quantile = severity_quantile.value_or(k_draw);
  const double r_quantile = severity_quantile.value_or(r_draw);
  noise.system_gain_k =
      std::clamp(std::exp(log_k_min + k_quantile * (log_k_max - log_k_min)),
                 config.system_gain.min, config.system_gain.max);
  noise.iso_ratio_r =
      config.iso_ratio.min +
      r_quantile * (config.iso_ratio.max - config.iso_ratio.min);

  const SensorProfile& profile = config.profile;
  const double log_k = std::log(noise.system_gain_k);
  noise.read_slope = profile.read_slope;
  noise.read_intercept = profile.read_intercept;
  noise.read_residual_sigma = profile.read_residual_sigma;
  noise.read_sigma = std::exp(profile.read_slope * log_k +
                              profile.read_intercept +
                              Normal(0.0, profile.read_residual_sigma)(rng));
  noise.row_slope = profile.row_slope;
  noise.row_intercept = profile.row_intercept;
  noise.row_residual_sigma = profile.row_residual_sigma;
  noise.row_sigma = std::exp(profile.row_slope * log_k + profile.row_intercept +
                             Normal(0.0, profile.row_residual_sigma)(rng));
  noise.tukey_lambda = profile.tukey_lambda;
  noise.color_bias = profile.color_bias;
  return {camera, noise};
}

}  // namespace dimlight
