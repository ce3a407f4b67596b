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

#include "cli.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "config.h"
#include "dimlight/degrade.h"
#include "dimlight/eval/report.h"
#include "dimlight/eval/run.h"
#include "dimlight/qa/dataset.h"
#include "dimlight/selftest.h"

namespace dimlight::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Looks up `key` in a config table, converting type mismatches to kConfig.
template <typename T>
T Setting(const json& table, const char* key, T fallback,
          std::string_view where) {
  if (!table.contains(key)) return fallback;
  try {
    return table.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::kConfig, "config " + std::string(where) + "." + key +
                                        " has the wrong type");
  }
}

const json& Section(const json& config, const char* name) {
  static const json kEmpty = json::object();
  return config.contains(name) ? config.at(name) : kEmpty;
}

Range RangeSetting(const json& table, const char* key, Range fallback) {
  if (!table.contains(key)) return fallback;
  const auto values =
      Setting<std::vector<double>>(table, key, {}, "degrade.sampling");
  if (values.size() != 2) {
    throw Error(ErrorKind::kConfig, std::string("degrade.sampling.") + key +
                                        " must be [min, max]");
  }
  return {values[0], values[1]};
}

// Options shared by every subcommand.
struct Globals {
  std::string config_path;
  std::uint64_t seed = 0;
  int jobs = 1;
  CLI::Option* seed_flag = nullptr;
  CLI::Option* jobs_flag = nullptr;

  json config = json::object();

  void Resolve() {
    if (!config_path.empty()) config = LoadConfigFile(config_path);
    RequireKnownKeys(config, "config",
                     {"seed", "jobs", "degrade", "genqa", "eval", "report"});
    if (!seed_flag->count()) seed = Setting<std::uint64_t>(config, "seed", 0, "");
    if (!jobs_flag->count()) jobs = Setting<int>(config, "jobs", 1, "");
    if (jobs < 1) throw Error(ErrorKind::kUsage, "--jobs must be at least 1");
  }
};

void PrintFailures(std::ostream& err, const std::vector<FrameFailure>& failures) {
  for (const FrameFailure& f : failures) {
    err << "frame " << f.scene << "/" << f.frame << " failed: " << f.message
        << "\n";
  }
}

// ---- degrade ----

struct DegradeArgs {
  std::string manifest;
  std::string out;
  std::string levels;
  std::string profile;
  std::string camera_matrices;
  bool ladder_coupled = false;
  CLI::Option* levels_flag = nullptr;
  CLI::Option* profile_flag = nullptr;
  CLI::Option* matrices_flag = nullptr;
  CLI::Option* coupled_flag = nullptr;
};

PipelineConfig ResolvePipeline(const DegradeArgs& args, const json& config) {
  const json& section = Section(config, "degrade");
  RequireKnownKeys(section, "degrade",
                   {"levels", "ladder_coupled", "profile", "camera_matrices",
                    "inverse_tone_map", "tone_map", "sampling"});
  PipelineConfig pipeline;
  pipeline.ladder_coupled =
      args.coupled_flag->count()
          ? true
          : Setting<bool>(section, "ladder_coupled", false, "degrade");
  pipeline.unprocess.inverse_tone_map =
      Setting<bool>(section, "inverse_tone_map", true, "degrade");
  pipeline.render.tone_map = Setting<bool>(section, "tone_map", false, "degrade");

  const std::string profile =
      args.profile_flag->count()
          ? args.profile
          : Setting<std::string>(section, "profile", "", "degrade");
  if (!profile.empty()) pipeline.sampling.profile = SensorProfile::Load(profile);
  const std::string matrices =
      args.matrices_flag->count()
          ? args.camera_matrices
          : Setting<std::string>(section, "camera_matrices", "", "degrade");
  if (!matrices.empty()) {
    pipeline.sampling.xyz_to_cam_bank = LoadColorMatrixBank(matrices);
  }

  const json& sampling = Section(section, "sampling");
  RequireKnownKeys(sampling, "degrade.sampling",
                   {"system_gain", "iso_ratio", "red_gain", "blue_gain",
                    "brightness_scale_mean", "brightness_scale_std",
                    "brightness_scale_clip"});
  SamplingConfig& s = pipeline.sampling;
  s.system_gain = RangeSetting(sampling, "system_gain", s.system_gain);
  s.iso_ratio = RangeSetting(sampling, "iso_ratio", s.iso_ratio);
  s.red_gain = RangeSetting(sampling, "red_gain", s.red_gain);
  s.blue_gain = RangeSetting(sampling, "blue_gain", s.blue_gain);
  s.brightness_scale_mean = Setting<double>(
      sampling, "brightness_scale_mean", s.brightness_scale_mean, "degrade.sampling");
  s.brightness_scale_std = Setting<double>(
      sampling, "brightness_scale_std", s.brightness_scale_std, "degrade.sampling");
  s.brightness_scale_clip =
      RangeSetting(sampling, "brightness_scale_clip", s.brightness_scale_clip);
  s.Validate();
  return pipeline;
}

int RunDegrade(const Globals& globals, const DegradeArgs& args,
               std::ostream& out, std::ostream& err) {
  const json& section = Section(globals.config, "degrade");
  const PipelineConfig pipeline = ResolvePipeline(args, globals.config);
  const std::string levels_spec =
      args.levels_flag->count()
          ? args.levels
          : Setting<std::string>(section, "levels", "L1..L5", "degrade");
  const auto levels = DegradationLevel::ParseList(levels_spec);
  const DatasetManifest manifest = DatasetManifest::Load(args.manifest);
  const RunReport report = ProcessDataset(manifest, levels, args.out, pipeline,
                                          {globals.seed, globals.jobs});
  out << report.ToJson().dump() << "\n";
  PrintFailures(err, report.failures);
  return report.failures.empty() ? kExitOk : kExitIo;
}

// ---- genqa ----

struct GenqaArgs {
  std::string manifest;
  std::string out;
  std::string cache;
  std::string review_csv;
  std::string tables;
  bool from_cache = false;
  CLI::Option* tables_flag = nullptr;
};

int RunGenqa(const Globals& globals, const GenqaArgs& args, std::ostream& out,
             std::ostream& err) {
  const json& section = Section(globals.config, "genqa");
  RequireKnownKeys(section, "genqa",
                   {"tables", "min_area_fraction", "depth_gap_m",
                    "color_ambiguity_ratio", "max_closest_choices",
                    "color_choices", "min_valid_depth_fraction"});
  qa::QaConfig qa_config;
  qa_config.min_area_fraction = Setting<double>(
      section, "min_area_fraction", qa_config.min_area_fraction, "genqa");
  qa_config.depth_gap_m =
      Setting<double>(section, "depth_gap_m", qa_config.depth_gap_m, "genqa");
  qa_config.color_ambiguity_ratio = Setting<double>(
      section, "color_ambiguity_ratio", qa_config.color_ambiguity_ratio, "genqa");
  qa_config.max_closest_choices = Setting<int>(
      section, "max_closest_choices", qa_config.max_closest_choices, "genqa");
  qa_config.color_choices =
      Setting<int>(section, "color_choices", qa_config.color_choices, "genqa");

  const std::string tables_dir =
      args.tables_flag->count()
          ? args.tables
          : Setting<std::string>(section, "tables", "", "genqa");
  qa::QaTables tables =
      tables_dir.empty() ? qa::QaTables::Defaults() : qa::QaTables::Load(tables_dir);
  const qa::QaEngine engine(std::move(tables), qa_config);

  qa::QaRunOptions options;
  options.global_seed = globals.seed;
  options.jobs = globals.jobs;
  options.stats.min_valid_depth_fraction =
      Setting<double>(section, "min_valid_depth_fraction",
                      options.stats.min_valid_depth_fraction, "genqa");
  if (!args.cache.empty()) options.cache_dir = fs::path(args.cache);
  options.from_cache = args.from_cache;

  const DatasetManifest manifest = DatasetManifest::Load(args.manifest);
  const qa::QaRunResult result = qa::GenerateDataset(manifest, engine, options);
  qa::WriteQaJsonl(args.out, result.pairs);
  if (!args.review_csv.empty()) {
    qa::WriteReviewCsv(args.review_csv, result.pairs, manifest);
  }

  json counts = json::object();
  for (qa::Family family : qa::kAllFamilies) {
    counts[std::string(qa::FamilyName(family))] =
        result.family_counts[static_cast<int>(family) - 1];
  }
  out << json{{"frames_processed", result.frames_processed},
              {"pairs", result.pairs.size()},
              {"family_counts", counts},
              {"failures", result.failures.size()},
              {"verification_errors", result.verification_errors.size()}}
             .dump()
      << "\n";
  PrintFailures(err, result.failures);
  for (const std::string& e : result.verification_errors) {
    err << "self-verification failed: " << e << "\n";
  }
  if (!result.verification_errors.empty()) return kExitInvariant;
  return result.failures.empty() ? kExitOk : kExitIo;
}

// ---- eval ----

struct EvalArgs {
  std::string qa;
  std::string images;
  std::string llie_images;
  std::string model;
  std::string conditions;
  std::string out;
  std::size_t max_requests = 0;
  bool blind = false;
  CLI::Option* conditions_flag = nullptr;
  CLI::Option* llie_flag = nullptr;
  CLI::Option* max_flag = nullptr;
};

int RunEvalCommand(const Globals& globals, const EvalArgs& args,
                   std::ostream& out, std::ostream& err) {
  const json& section = Section(globals.config, "eval");
  RequireKnownKeys(section, "eval",
                   {"conditions", "llie_images", "max_requests"});

  const json descriptor_doc = LoadConfigFile(args.model);
  eval::EndpointDescriptor endpoint =
      eval::EndpointDescriptor::FromJson(descriptor_doc);
  if (globals.seed_flag->count() || !descriptor_doc.contains("seed")) {
    endpoint.seed = globals.seed;
  }
  if (globals.jobs_flag->count()) endpoint.concurrency = globals.jobs;
  if (args.blind) endpoint.blind = true;

  eval::EvalOptions options;
  options.images = args.images;
  const std::string llie =
      args.llie_flag->count()
          ? args.llie_images
          : Setting<std::string>(section, "llie_images", "", "eval");
  if (!llie.empty()) options.llie_images = fs::path(llie);
  const std::string conditions =
      args.conditions_flag->count()
          ? args.conditions
          : Setting<std::string>(section, "conditions", "", "eval");
  if (conditions.empty()) {
    throw Error(ErrorKind::kUsage,
                "--conditions is required (or eval.conditions in the config)");
  }
  options.conditions = eval::ParseConditions(conditions);
  options.journal = args.out;
  if (args.max_flag->count()) {
    options.max_new_requests = args.max_requests;
  } else if (section.contains("max_requests")) {
    options.max_new_requests =
        Setting<std::size_t>(section, "max_requests", 0, "eval");
  }

  const auto pairs = qa::ReadQaJsonl(args.qa);
  auto client = eval::MakeClient(endpoint);
  const eval::EvalRunSummary summary =
      eval::RunEval(endpoint, *client, pairs, options);
  out << json{{"model", endpoint.id},
              {"records", summary.records.size()},
              {"resumed", summary.resumed},
              {"issued", summary.issued},
              {"failed", summary.failed}}
             .dump()
      << "\n";
  if (summary.failed > 0) {
    err << summary.failed
        << " requests failed after retries; rerun to retry them\n";
    return kExitIo;
  }
  return kExitOk;
}

// ---- report ----

struct ReportArgs {
  std::vector<std::string> journals;
  std::string format;
  std::string out;
  CLI::Option* format_flag = nullptr;
};

int RunReport(const Globals& globals, const ReportArgs& args,
              std::ostream& out) {
  const json& section = Section(globals.config, "report");
  RequireKnownKeys(section, "report", {"format"});
  const std::string format =
      args.format_flag->count()
          ? args.format
          : Setting<std::string>(section, "format", "md", "report");
  std::vector<eval::EvalRecord> records;
  for (const std::string& journal : args.journals) {
    if (!fs::exists(journal)) {
      throw Error(ErrorKind::kIo, "journal not found: " + journal);
    }
    for (eval::EvalRecord& r :
         eval::LatestRecords(eval::Journal::Read(journal))) {
      records.push_back(std::move(r));
    }
  }
  const std::string text = eval::Score(records).Render(format);
  if (args.out.empty()) {
    out << text;
  } else {
    std::ofstream file(args.out, std::ios::binary);
    if (!(file << text)) throw Error(ErrorKind::kIo, "cannot write " + args.out);
  }
  return kExitOk;
}

// ---- selftest ----

int RunSelftest(const Globals& globals, std::ostream& out) {
  int failed = 0;
  const auto results = RunSelfTest(globals.seed);
  for (const CheckResult& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    if (!r.passed) ++failed;
  }
  out << "selftest: " << results.size() - failed << "/" << results.size()
      << " checks passed\n";
  return failed == 0 ? kExitOk : kExitInvariant;
}

}  // namespace

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kConfig:
      return kExitUsage;
    case ErrorKind::kIo:
    case ErrorKind::kStructural:
    case ErrorKind::kEmptyReport:
      return kExitIo;
    case ErrorKind::kDimension:
    case ErrorKind::kDomain:
      return kExitInvariant;
  }
  return kExitInvariant;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Low-light degradation, QA generation and model evaluation",
               "dimlight"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  app.add_option("--config", globals.config_path,
                 "TOML or JSON config file (auto-detected)")
      ->check(CLI::ExistingFile);
  globals.seed_flag =
      app.add_option("--seed", globals.seed, "Global seed (default 0)");
  globals.jobs_flag = app.add_option("--jobs", globals.jobs,
                                     "Worker threads (default 1)");

  DegradeArgs degrade;
  CLI::App* degrade_cmd =
      app.add_subcommand("degrade", "Write EV-drop and noisy variants");
  degrade_cmd->add_option("--manifest", degrade.manifest, "Frame manifest (JSONL)")
      ->required();
  degrade_cmd->add_option("--out", degrade.out, "Output root")->required();
  degrade.levels_flag = degrade_cmd->add_option(
      "--levels", degrade.levels, "Levels, e.g. L1..L5 or L0,L3 (default L1..L5)");
  degrade.coupled_flag = degrade_cmd->add_flag(
      "--ladder-coupled", degrade.ladder_coupled,
      "Pin K and r to level quantiles instead of sampling them");
  degrade.profile_flag =
      degrade_cmd->add_option("--profile", degrade.profile, "Sensor profile file");
  degrade.matrices_flag = degrade_cmd->add_option(
      "--camera-matrices", degrade.camera_matrices, "xyz->camera matrix bank");

  GenqaArgs genqa;
  CLI::App* genqa_cmd =
      app.add_subcommand("genqa", "Generate multiple-choice QA pairs");
  genqa_cmd->add_option("--manifest", genqa.manifest, "Frame manifest (JSONL)")
      ->required();
  genqa_cmd->add_option("--out", genqa.out, "QA JSONL output")->required();
  genqa_cmd->add_option("--cache", genqa.cache, "Stage-1 statistics cache dir");
  genqa_cmd->add_flag("--from-cache", genqa.from_cache,
                      "Read statistics from --cache instead of rasters");
  genqa_cmd->add_option("--review-csv", genqa.review_csv,
                        "Also write a CSV for human review");
  genqa.tables_flag =
      genqa_cmd->add_option("--tables", genqa.tables, "Rule table directory");

  EvalArgs eval;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Query a model endpoint and journal answers");
  eval_cmd->add_option("--qa", eval.qa, "QA JSONL")->required();
  eval_cmd->add_option("--images", eval.images, "degrade output root")->required();
  eval.llie_flag = eval_cmd->add_option("--llie-images", eval.llie_images,
                                        "Enhanced copy of the --images tree");
  eval_cmd->add_option("--model", eval.model, "Endpoint config (JSON or TOML)")
      ->required();
  eval.conditions_flag = eval_cmd->add_option(
      "--conditions", eval.conditions, "e.g. L0,L1..L5:ev,L1..L5:noise+llie");
  eval_cmd->add_option("--out", eval.out, "Journal (JSONL, appended)")->required();
  eval.max_flag = eval_cmd->add_option("--max-requests", eval.max_requests,
                                       "Stop after this many new requests");
  eval_cmd->add_flag("--blind", eval.blind, "Text-only queries");

  ReportArgs report;
  CLI::App* report_cmd =
      app.add_subcommand("report", "Score journals into accuracy tables");
  report_cmd->add_option("--journal", report.journals, "Journal(s)")->required();
  report.format_flag =
      report_cmd->add_option("--format", report.format, "csv, json or md")
          ->check(CLI::IsMember({"csv", "json", "md"}));
  report_cmd->add_option("--out", report.out, "Write here instead of stdout");

  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "Run the statistical invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    globals.Resolve();
    if (*degrade_cmd) return RunDegrade(globals, degrade, out, err);
    if (*genqa_cmd) return RunGenqa(globals, genqa, out, err);
    if (*eval_cmd) return RunEvalCommand(globals, eval, out, err);
    if (*report_cmd) return RunReport(globals, report, out);
    if (*selftest_cmd) return RunSelftest(globals, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitUsage;
}

}  // namespace dimlight::cli
