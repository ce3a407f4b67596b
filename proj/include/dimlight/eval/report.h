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

#ifndef DIMLIGHT_EVAL_REPORT_H_
#define DIMLIGHT_EVAL_REPORT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dimlight/eval/condition.h"
#include "dimlight/eval/run.h"

namespace dimlight::eval {

struct Tally {
  std::size_t correct = 0;
  std::size_t total = 0;
  std::size_t unparseable = 0;
  std::size_t failed = 0;

  // correct / total, in [0, 1].
  double accuracy() const;
  // Accuracy in hundredths of a percent, rounded half away from zero; the
  // unit every displayed number and delta is computed in.
  std::int64_t hundredths() const;
};

// "75.00"
std::string FormatPercent(std::int64_t hundredths);
// Signed, e.g. "-7.07", "+0.18", "+0.00".
std::string FormatDelta(std::int64_t hundredths);

struct ReportCell {
  Tally overall;
  std::map<qa::Family, Tally> by_family;
};

class AccuracyReport {
 public:
  // model -> condition -> cell.
  using Table = std::map<std::string, std::map<Condition, ReportCell>>;

  explicit AccuracyReport(Table table) : table_(std::move(table)) {}

  const Table& table() const { return table_; }
  std::size_t cell_count() const;

  // Condition minus the same model's L0 baseline, in hundredths of a
  // percent of the displayed (rounded) accuracies. Unset for the baseline
  // itself or when no baseline was scored. With a family, compares that
  // family's accuracies.
  std::optional<std::int64_t> Delta(
      const std::string& model, const Condition& condition,
      std::optional<qa::Family> family = std::nullopt) const;

  // Long format, one row per (model, condition, family|"all").
  std::string ToCsv() const;
  nlohmann::json ToJson() const;
  // Per model: baseline, one row per (noise, llie) combination, one column
  // per level; then a per-family table.
  std::string ToMarkdown() const;
  // "csv", "json" or "md"; kUsage otherwise.
  std::string Render(std::string_view format) const;

 private:
  Table table_;
};

// Pure fold: record order never changes the result. Throws kEmptyReport
// for an empty input and kStructural when one model mixes prompt versions.
AccuracyReport Score(const std::vector<EvalRecord>& records);

}  // namespace dimlight::eval

#endif  // DIMLIGHT_EVAL_REPORT_H_
