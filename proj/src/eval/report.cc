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

#include "dimlight/eval/report.h"

#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "dimlight/error.h"

namespace dimlight::eval {

using nlohmann::json;

namespace {

const Condition kBaseline{};

const Tally* FindTally(const ReportCell& cell, std::optional<qa::Family> family) {
  if (!family) return &cell.overall;
  auto it = cell.by_family.find(*family);
  return it == cell.by_family.end() ? nullptr : &it->second;
}

std::string DeltaText(const std::optional<std::int64_t>& delta) {
  return delta ? FormatDelta(*delta) : "";
}

}  // namespace

double Tally::accuracy() const {
  return total == 0 ? 0.0 : static_cast<double>(correct) / total;
}

std::int64_t Tally::hundredths() const {
  if (total == 0) return 0;
  // Exact integer rounding of 10000 * correct / total, half away from zero.
  const auto num = static_cast<std::int64_t>(correct) * 10000;
  const auto den = static_cast<std::int64_t>(total);
  return (2 * num + den) / (2 * den);
}

std::string FormatPercent(std::int64_t hundredths) {
  std::ostringstream out;
  out << hundredths / 100 << '.' << (hundredths % 100 < 10 ? "0" : "")
      << hundredths % 100;
  return out.str();
}

std::string FormatDelta(std::int64_t hundredths) {
  return (hundredths < 0 ? "-" : "+") + FormatPercent(std::llabs(hundredths));
}

std::size_t AccuracyReport::cell_count() const {
  std::size_t n = 0;
  for (const auto& [model, cells] : table_) n += cells.size();
  return n;
}

std::optional<std::int64_t> AccuracyReport::Delta(
    const std::string& model, const Condition& condition,
    std::optional<qa::Family> family) const {
  if (condition.is_baseline()) return std::nullopt;
  auto m = table_.find(model);
  if (m == table_.end()) return std::nullopt;
  auto base = m->second.find(kBaseline);
  auto cell = m->second.find(condition);
  if (base == m->second.end() || cell == m->second.end()) return std::nullopt;
  const Tally* b = FindTally(base->second, family);
  const Tally* c = FindTally(cell->second, family);
  if (b == nullptr || c == nullptr) return std::nullopt;
  return c->hundredths() - b->hundredths();
}

std::string AccuracyReport::ToCsv() const {
  std::ostringstream out;
  out << "model,condition,level,noise,llie,family,correct,total,unparseable,"
         "failed,accuracy,delta_vs_L0\n";
  auto row = [&](const std::string& model, const Condition& c,
                 std::string_view family, const Tally& t,
                 const std::optional<std::int64_t>& delta) {
    out << model << ',' << c.Key() << ',' << c.level.name() << ','
        << (c.noise ? "yes" : "no") << ',' << (c.llie ? "yes" : "no") << ','
        << family << ',' << t.correct << ',' << t.total << ','
        << t.unparseable << ',' << t.failed << ','
        << FormatPercent(t.hundredths()) << ',' << DeltaText(delta) << '\n';
  };
  for (const auto& [model, cells] : table_) {
    for (const auto& [c, cell] : cells) {
      row(model, c, "all", cell.overall, Delta(model, c));
      for (const auto& [family, t] : cell.by_family) {
        row(model, c, qa::FamilyName(family), t, Delta(model, c, family));
      }
    }
  }
  return out.str();
}

json AccuracyReport::ToJson() const {
  auto tally_json = [](const Tally& t) {
    return json{{"correct", t.correct},
                {"total", t.total},
                {"unparseable", t.unparseable},
                {"failed", t.failed},
                {"accuracy", FormatPercent(t.hundredths())}};
  };
  json models = json::object();
  for (const auto& [model, cells] : table_) {
    json rows = json::array();
    for (const auto& [c, cell] : cells) {
      json row = tally_json(cell.overall);
      row["condition"] = c.Key();
      row["level"] = c.level.name();
      row["noise"] = c.noise;
      row["llie"] = c.llie;
      if (auto d = Delta(model, c)) row["delta_vs_L0"] = FormatDelta(*d);
      json families = json::object();
      for (const auto& [family, t] : cell.by_family) {
        json f = tally_json(t);
        if (auto d = Delta(model, c, family)) f["delta_vs_L0"] = FormatDelta(*d);
        families[std::string(qa::FamilyName(family))] = std::move(f);
      }
      row["families"] = std::move(families);
      rows.push_back(std::move(row));
    }
    models[model] = std::move(rows);
  }
  return {{"schema", "dimlight.accuracy_report/1"},
          {"unit", "percent"},
          {"models", std::move(models)}};
}

std::string AccuracyReport::ToMarkdown() const {
  std::ostringstream out;
  std::set<int> levels;
  for (const auto& [model, cells] : table_) {
    for (const auto& [c, cell] : cells) {
      if (!c.is_baseline()) levels.insert(c.level.index());
    }
  }
  out << "| Model | L0 | EV drop | Noise | LLIE |";
  for (int l : levels) out << " L" << l << " |";
  out << "\n|---|---|---|---|---|";
  for (std::size_t i = 0; i < levels.size(); ++i) out << "---|";
  out << '\n';
  for (const auto& [model, cells] : table_) {
    auto base = cells.find(kBaseline);
    const std::string baseline =
        base == cells.end() ? "n/a"
                            : FormatPercent(base->second.overall.hundredths());
    std::set<std::pair<bool, bool>> rows;
    for (const auto& [c, cell] : cells) {
      if (!c.is_baseline()) rows.insert({c.noise, c.llie});
    }
    if (rows.empty()) {
      out << "| " << model << " | " << baseline << " | | | |";
      for (std::size_t i = 0; i < levels.size(); ++i) out << " |";
      out << '\n';
    }
    bool first = true;
    for (const auto& [noise, llie] : rows) {
      out << "| " << (first ? model : "") << " | " << (first ? baseline : "")
          << " | yes | " << (noise ? "yes" : "no") << " | "
          << (llie ? "yes" : "no") << " |";
      for (int l : levels) {
        const Condition c{DegradationLevel(l), noise, llie};
        auto it = cells.find(c);
        if (it == cells.end()) {
          out << " n/a |";
          continue;
        }
        out << ' ' << FormatPercent(it->second.overall.hundredths());
        if (auto d = Delta(model, c)) out << " (" << FormatDelta(*d) << ')';
        out << " |";
      }
      out << '\n';
      first = false;
    }
  }

  out << "\n| Model | Condition |";
  for (qa::Family f : qa::kAllFamilies) out << ' ' << qa::FamilyName(f) << " |";
  out << "\n|---|---|";
  for (std::size_t i = 0; i < qa::kAllFamilies.size(); ++i) out << "---|";
  out << '\n';
  for (const auto& [model, cells] : table_) {
    for (const auto& [c, cell] : cells) {
      out << "| " << model << " | " << c.Key() << " |";
      for (qa::Family f : qa::kAllFamilies) {
        const Tally* t = FindTally(cell, f);
        out << ' ' << (t ? FormatPercent(t->hundredths()) : "n/a") << " |";
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string AccuracyReport::Render(std::string_view format) const {
  if (format == "csv") return ToCsv();
  if (format == "json") return ToJson().dump(2) + "\n";
  if (format == "md") return ToMarkdown();
  throw Error(ErrorKind::kUsage,
              "unknown report format '" + std::string(format) +
                  "' (expected csv, json or md)");
}

AccuracyReport Score(const std::vector<EvalRecord>& records) {
  if (records.empty()) {
    throw Error(ErrorKind::kEmptyReport, "no evaluation records to score");
  }
  AccuracyReport::Table table;
  std::map<std::string, std::string> versions;
  for (const EvalRecord& r : records) {
    auto [it, inserted] = versions.try_emplace(r.model, r.prompt_version);
    if (!inserted && it->second != r.prompt_version) {
      throw Error(ErrorKind::kStructural,
                  "model " + r.model + " mixes prompt versions " + it->second +
                      " and " + r.prompt_version);
    }
    ReportCell& cell = table[r.model][Condition::Parse(r.condition)];
    for (Tally* t : {&cell.overall, &cell.by_family[r.family]}) {
      ++t->total;
      t->correct += r.correct;
      t->failed += r.failed;
      t->unparseable += !r.failed && !r.parsed_index;
    }
  }
  return AccuracyReport(std::move(table));
}

}  // namespace dimlight::eval
