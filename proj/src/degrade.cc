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

#include "dimlight/degrade.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>

#include "dimlight/error.h"
#include "dimlight/parallel.h"
#include "dimlight/png_io.h"
#include "dimlight/raw_noise.h"
#include "dimlight/seed.h"

namespace dimlight {

using nlohmann::json;

namespace {

constexpr std::array<double, 6> kLadderStops = {0.0, 2.0, 4.0, 6.0, 7.5, 9.0};
constexpr std::array<double, 5> kLadderQuantiles = {0.1, 0.3, 0.5, 0.7, 0.9};

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
}

json MatrixToJson(const Matrix3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
  return rows;
}

}  // namespace

DegradationLevel::DegradationLevel(int index) : index_(index) {
  if (index < 0 || index > kMaxIndex) {
    throw Error(ErrorKind::kConfig,
                "degradation level must be L0..L5, got index " +
                    std::to_string(index));
  }
}

DegradationLevel DegradationLevel::Parse(std::string_view name) {
  if (name.size() == 2 && (name[0] == 'L' || name[0] == 'l') &&
      name[1] >= '0' && name[1] <= '9') {
    return DegradationLevel(name[1] - '0');
  }
  throw Error(ErrorKind::kConfig,
              "unknown degradation level '" + std::string(name) + "'");
}

std::vector<DegradationLevel> DegradationLevel::ParseList(std::string_view spec) {
  std::set<int> indices;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', pos), spec.size());
    std::string_view token = spec.substr(pos, comma - pos);
    pos = comma + 1;
    if (token.empty()) continue;
    std::size_t sep = token.find("..");
    std::size_t sep_len = 2;
    if (sep == std::string_view::npos) {
      sep = token.find('-');
      sep_len = 1;
    }
    if (sep != std::string_view::npos) {
      const int lo = Parse(token.substr(0, sep)).index();
      const int hi = Parse(token.substr(sep + sep_len)).index();
      if (lo > hi) {
        throw Error(ErrorKind::kConfig,
                    "level range '" + std::string(token) + "' is inverted");
      }
      for (int i = lo; i <= hi; ++i) indices.insert(i);
    } else {
      indices.insert(Parse(token).index());
    }
  }
  if (indices.empty()) {
    throw Error(ErrorKind::kConfig, "no degradation levels given");
  }
  std::vector<DegradationLevel> levels;
  for (int i : indices) levels.emplace_back(i);
  return levels;
}

EvDrop DegradationLevel::ev() const { return LevelToEv(*this); }

EvDrop LevelToEv(DegradationLevel level) {
  return EvDrop(kLadderStops[level.index()]);
}

double LadderQuantile(DegradationLevel level) {
  if (level.index() == 0) {
    throw Error(ErrorKind::kConfig, "L0 has no noise severity");
  }
  return kLadderQuantiles[level.index() - 1];
}

std::string_view VariantName(Variant variant) {
  switch (variant) {
    case Variant::kOriginal:
      return "original";
    case Variant::kEvDrop:
      return "evdrop";
    case Variant::kNoisy:
      return "noisy";
  }
  return "";
}

Variant ParseVariant(std::string_view name) {
  for (Variant v : {Variant::kOriginal, Variant::kEvDrop, Variant::kNoisy}) {
    if (VariantName(v) == name) return v;
  }
  throw Error(ErrorKind::kConfig, "unknown variant '" + std::string(name) + "'");
}

SynthesisResult SynthesizePair(const SrgbImage& image, DegradationLevel level,
                               std::uint64_t global_seed,
                               std::string_view scene, std::string_view frame,
                               const PipelineConfig& config) {
  SynthesisResult result;
  result.frame_seed =
      DeriveFrameSeed(global_seed, scene, frame, level.index());
  if (level.index() == 0) {
    result.noise_free = image;
    result.noisy = image;
    return result;
  }
  const EvDrop drop = level.ev();
  result.noise_free =
      EncodeLinearToSrgb(ApplyEvDrop(DecodeSrgbToLinear(image), drop));

  std::optional<double> quantile;
  if (config.ladder_coupled) quantile = LadderQuantile(level);
  auto [camera, noise] = SampleCameraParams(
      DeriveStreamSeed(result.frame_seed, "camera"), config.sampling, quantile);
  RandomStream noise_rng(DeriveStreamSeed(result.frame_seed, "noise"));
  const BayerRaw clean = Unprocess(image, camera, config.unprocess);
  const BayerRaw noisy = InjectNoise(clean, camera, noise, noise_rng);
  result.noisy = Render(noisy, camera, drop, config.render);
  result.camera = camera;
  result.noise = noise;
  return result;
}

json RunReport::ToJson() const {
  json failures_json = json::array();
  for (const auto& f : failures) {
    failures_json.push_back(
        {{"scene", f.scene}, {"frame", f.frame}, {"message", f.message}});
  }
  return {{"frames_processed", frames_processed},
          {"images_written", images_written},
          {"failures", failures_json},
          {"wall_seconds", wall_seconds}};
}

std::filesystem::path VariantPath(const std::filesystem::path& root,
                                  std::string_view scene,
                                  std::string_view frame,
                                  DegradationLevel level, Variant variant) {
  return root / std::string(scene) / std::string(frame) / level.name() /
         (std::string(VariantName(variant)) + ".png");
}

json CameraParamsToJson(const CameraParams& camera) {
  return {{"rgb_to_cam", MatrixToJson(camera.rgb_to_cam)},
          {"cam_to_rgb", MatrixToJson(camera.cam_to_rgb)},
          {"wb_gain_red", camera.wb_gain_red},
          {"wb_gain_blue", camera.wb_gain_blue},
          {"brightness_gain", camera.brightness_gain},
          {"white_level", camera.white_level},
          {"seed_tag", camera.seed_tag}};
}

json NoiseParamsToJson(const NoiseParams& noise) {
  return {{"system_gain_k", noise.system_gain_k},
          {"iso_ratio_r", noise.iso_ratio_r},
          {"read_slope", noise.read_slope},
          {"read_intercept", noise.read_intercept},
          {"read_residual_sigma", noise.read_residual_sigma},
          {"read_sigma", noise.read_sigma},
          {"row_slope", noise.row_slope},
          {"row_intercept", noise.row_intercept},
          {"row_residual_sigma", noise.row_residual_sigma},
          {"row_sigma", noise.row_sigma},
          {"tukey_lambda", noise.tukey_lambda},
          {"color_bias", noise.color_bias}};
}

namespace {

// Returns the number of images written for one frame.
// Counts into `written` as it goes so a frame that fails part way still
// reports the images it left on disk.
void ProcessFrame(const ManifestEntry& entry,
                  const std::vector<DegradationLevel>& levels,
                  const std::filesystem::path& out_dir,
                  const PipelineConfig& config, std::uint64_t global_seed,
                  std::size_t& written) {
  const SrgbImage source = SrgbImage::FromBytes(ReadRgb8Png(entry.rgb));
  for (const DegradationLevel level : levels) {
    const SynthesisResult pair = SynthesizePair(source, level, global_seed,
                                                entry.scene, entry.frame, config);
    json sidecar = {{"schema", "dimlight.variant/1"},
                    {"scene", entry.scene},
                    {"frame", entry.frame},
                    {"level", level.name()},
                    {"delta_ev", level.ev().stops()},
                    {"global_seed", global_seed},
                    {"frame_seed", pair.frame_seed}};
    auto emit = [&](Variant variant, const SrgbImage& image) {
      const auto path =
          VariantPath(out_dir, entry.scene, entry.frame, level, variant);
      std::filesystem::create_directories(path.parent_path());
      WriteRgb8Png(path, image.ToBytes());
      json meta = sidecar;
      meta["variant"] = VariantName(variant);
      if (variant == Variant::kNoisy) {
        meta["profile"] = config.sampling.profile.name;
        meta["ladder_coupled"] = config.ladder_coupled;
        meta["inverse_tone_map"] = config.unprocess.inverse_tone_map;
        meta["camera"] = CameraParamsToJson(*pair.camera);
        meta["noise"] = NoiseParamsToJson(*pair.noise);
      }
      auto meta_path = path;
      meta_path.replace_extension(".json");
      WriteText(meta_path, meta.dump(2) + "\n");
      ++written;
    };
    if (level.index() == 0) {
      emit(Variant::kOriginal, source);
    } else {
      emit(Variant::kEvDrop, pair.noise_free);
      emit(Variant::kNoisy, pair.noisy);
    }
  }
}

void EnsureWritable(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::kIo, "cannot create output directory " + dir.string());
  }
  const auto probe = dir / ".dimlight-write-probe";
  {
    std::ofstream out(probe);
    if (!out) {
      throw Error(ErrorKind::kIo, "output directory is not writable: " +
                                      dir.string());
    }
  }
  std::filesystem::remove(probe, ec);
}

}  // namespace

RunReport ProcessDataset(const DatasetManifest& manifest,
                         const std::vector<DegradationLevel>& levels,
                         const std::filesystem::path& out_dir,
                         const PipelineConfig& config,
                         const DatasetRunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  EnsureWritable(out_dir);
  config.sampling.Validate();

  const auto& frames = manifest.frames();
  std::vector<std::optional<std::string>> errors(frames.size());
  std::vector<std::size_t> written(frames.size(), 0);
  ParallelFor(frames.size(), options.jobs, [&](std::size_t i) {
    try {
      ProcessFrame(frames[i], levels, out_dir, config, options.global_seed,
                   written[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  // Aggregate in manifest order so the report does not depend on scheduling.
  RunReport report;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    report.images_written += written[i];
    if (errors[i]) {
      report.failures.push_back({frames[i].scene, frames[i].frame, *errors[i]});
    } else {
      ++report.frames_processed;
    }
  }
  report.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return report;
}

}  // namespace dimlight
