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

#include "dimlight/qa/dataset.h"

#include <fstream>
#include <map>
#include <sstream>

#include "dimlight/error.h"
#include "dimlight/parallel.h"

namespace dimlight::qa {

using nlohmann::json;

namespace {

struct FrameOutcome {
  std::vector<QAPair> pairs;
  std::vector<std::string> verification_errors;
  std::optional<std::string> error;
};

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kStructural,
                path.string() + ": " + std::string(e.what()));
  }
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
}

std::string CsvField(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

FrameOutcome ProcessFrame(const ManifestEntry& entry, const QaEngine& engine,
                          const QaRunOptions& options) {
  FrameOutcome outcome;
  FrameStatistics stats;
  if (options.from_cache) {
    stats = StatsFromJson(ReadJsonFile(
        StatsCachePath(*options.cache_dir, entry.scene, entry.frame)));
    if (stats.scene != entry.scene || stats.frame != entry.frame) {
      throw Error(ErrorKind::kStructural, "stats cache for " + entry.scene +
                                              "/" + entry.frame +
                                              " names another frame");
    }
  } else {
    stats = ExtractSegmentStats(LoadFrameBundle(entry), options.stats);
    if (options.cache_dir) {
      WriteFile(StatsCachePath(*options.cache_dir, entry.scene, entry.frame),
                StatsToJson(stats, options.stats).dump(1) + "\n");
    }
  }
  outcome.pairs = engine.Generate(stats, options.global_seed);
  for (const QAPair& pair : outcome.pairs) {
    if (auto reason = engine.Verify(pair, stats)) {
      outcome.verification_errors.push_back(
          entry.scene + "/" + entry.frame + " " +
          std::string(FamilyName(pair.family)) + ": " + *reason);
    }
  }
  return outcome;
}

}  // namespace

std::filesystem::path StatsCachePath(const std::filesystem::path& cache_dir,
                                     std::string_view scene,
                                     std::string_view frame) {
  return cache_dir / std::string(scene) /
         (std::string(frame) + ".stats.json");
}

QaRunResult GenerateDataset(const DatasetManifest& manifest,
                            const QaEngine& engine,
                            const QaRunOptions& options) {
  if (options.from_cache && !options.cache_dir) {
    throw Error(ErrorKind::kUsage, "reading from cache needs a cache directory");
  }
  const auto& frames = manifest.frames();
  std::vector<FrameOutcome> outcomes(frames.size());
  ParallelFor(frames.size(), options.jobs, [&](std::size_t i) {
    try {
      outcomes[i] = ProcessFrame(frames[i], engine, options);
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  });

  QaRunResult result;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    FrameOutcome& o = outcomes[i];
    if (o.error) {
      result.failures.push_back({frames[i].scene, frames[i].frame, *o.error});
      continue;
    }
    ++result.frames_processed;
    for (QAPair& pair : o.pairs) {
      ++result.family_counts[static_cast<int>(pair.family) - 1];
      result.pairs.push_back(std::move(pair));
    }
    for (std::string& e : o.verification_errors) {
      result.verification_errors.push_back(std::move(e));
    }
  }
  return result;
}

void WriteQaJsonl(const std::filesystem::path& path,
                  const std::vector<QAPair>& pairs) {
  std::string text;
  for (const QAPair& pair : pairs) text += pair.ToJson().dump() + "\n";
  WriteFile(path, text);
}

std::vector<QAPair> ReadQaJsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::vector<QAPair> pairs;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      pairs.push_back(QAPair::FromJson(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kStructural, path.string() + ":" +
                                              std::to_string(number) + ": " +
                                              e.what());
    } catch (const Error& e) {
      throw Error(ErrorKind::kStructural, path.string() + ":" +
                                              std::to_string(number) + ": " +
                                              e.what());
    }
  }
  return pairs;
}

void WriteReviewCsv(const std::filesystem::path& path,
                    const std::vector<QAPair>& pairs,
                    const DatasetManifest& manifest) {
  std::map<std::pair<std::string, std::string>, std::string> rgb;
  for (const ManifestEntry& e : manifest.frames()) {
    rgb[{e.scene, e.frame}] = e.rgb.string();
  }
  std::ostringstream out;
  out << "scene,frame,family,question,choices,answer,rgb\n";
  for (const QAPair& p : pairs) {
    std::string choices;
    for (std::size_t i = 0; i < p.choices.size(); ++i) {
      if (i > 0) choices += " | ";
      choices += p.choices[i];
    }
    out << CsvField(p.scene) << ',' << CsvField(p.frame) << ','
        << FamilyName(p.family) << ',' << CsvField(p.question) << ','
        << CsvField(choices) << ',' << CsvField(p.answer()) << ','
        << CsvField(rgb[{p.scene, p.frame}]) << '\n';
  }
  WriteFile(path, out.str());
}

}  // namespace dimlight::qa
