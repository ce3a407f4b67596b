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

#ifndef DIMLIGHT_QA_DATASET_H_
#define DIMLIGHT_QA_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dimlight/degrade.h"
#include "dimlight/manifest.h"
#include "dimlight/qa/generate.h"

namespace dimlight::qa {

struct QaRunOptions {
  std::uint64_t global_seed = 0;
  int jobs = 1;
  StatsOptions stats;
  // Stage-1 cache root: {cache_dir}/{scene}/{frame}.stats.json.
  std::optional<std::filesystem::path> cache_dir;
  // Skip raster loading and read statistics from cache_dir instead.
  bool from_cache = false;
};

struct QaRunResult {
  // Manifest order, then family order within a frame.
  std::vector<QAPair> pairs;
  std::size_t frames_processed = 0;
  std::vector<FrameFailure> failures;
  // Pairs whose self-verification failed; a correct engine leaves this empty.
  std::vector<std::string> verification_errors;
  std::size_t family_counts[5] = {};
};

std::filesystem::path StatsCachePath(const std::filesystem::path& cache_dir,
                                     std::string_view scene,
                                     std::string_view frame);

// Runs both stages over every manifest frame. Output is independent of
// options.jobs. Every emitted pair is re-verified against its frame's
// statistics.
QaRunResult GenerateDataset(const DatasetManifest& manifest,
                            const QaEngine& engine,
                            const QaRunOptions& options);

void WriteQaJsonl(const std::filesystem::path& path,
                  const std::vector<QAPair>& pairs);
// kStructural on malformed lines, with the line number.
std::vector<QAPair> ReadQaJsonl(const std::filesystem::path& path);

// Flat table for human review: scene, frame, family, question, choices
// (" | "-joined), answer, rgb path.
void WriteReviewCsv(const std::filesystem::path& path,
                    const std::vector<QAPair>& pairs,
                    const DatasetManifest& manifest);

}  // namespace dimlight::qa

#endif  // DIMLIGHT_QA_DATASET_H_
