// Copyright 2026 The sbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sbsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sbsim/errors.hpp"

namespace sbsim {
namespace {

using nlohmann::json;

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void Finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string Fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string CsvLine(const SweepRow& row) {
  std::ostringstream os;
  os << row.batch_size << ',' << ToString(row.strategy) << ',' << row.concurrency << ',' << row.total_cost.Format4()
     << ',' << Fixed4(row.makespan_min) << ',' << row.invocation_count << ',' << row.compute_cost.Format4() << ','
     << row.orchestration_cost.Format4();
  return os.str();
}

void EmitCsv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  out << kCsvHeader << '\n';
  for (const auto& row : rows) out << CsvLine(row) << '\n';
  Finish(out, path);
}

std::string TraceLine(const InvocationRecord& rec) {
  json j;
  j["invocation_id"] = rec.invocation_id;
  j["start_ms"] = ToMs(rec.start);
  j["end_ms"] = ToMs(rec.end);
  j["items_processed"] = rec.items_processed;
  j["batches_processed"] = rec.batches_processed;
  j["raw_duration_ms"] = ToMs(rec.raw_duration());
  j["billed_duration_ms"] = rec.billed_duration.count();
  j["memory_used_mb"] = rec.memory_used_mb;
  return j.dump();
}

void EmitTrace(const SimulationResult& result, const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  for (const auto& rec : result.trace) out << TraceLine(rec) << '\n';
  Finish(out, path);
}

std::string TraceFileName(const SimulationResult& result) {
  std::ostringstream os;
  os << "trace_" << ToString(result.strategy) << "_b" << result.batch_size << "_k" << result.concurrency << ".jsonl";
  return os.str();
}

std::vector<std::filesystem::path> EmitPlotData(const std::vector<SweepRow>& rows, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  for (const Strategy strategy : {Strategy::kMonolithic, Strategy::kParallel}) {
    std::set<std::int64_t> caps;
    std::map<std::int64_t, std::map<std::int64_t, const SweepRow*>> by_size;
    for (const auto& r : rows) {
      if (r.strategy != strategy) continue;
      caps.insert(r.concurrency);
      by_size[r.batch_size][r.concurrency] = &r;
    }
    if (by_size.empty()) continue;

    const std::string name(ToString(strategy));
    for (const bool cost : {true, false}) {
      const auto path = dir / ((cost ? "plot_cost_" : "plot_makespan_") + name + ".dat");
      auto out = OpenForWrite(path);
      out << "# " << (cost ? "total_cost" : "makespan_min") << " vs batch_size, strategy=" << name << '\n';
      out << "# batch_size";
      for (const auto k : caps) out << " k" << k;
      out << '\n';
      for (const auto& [size, row_by_cap] : by_size) {
        out << size;
        for (const auto k : caps) {
          const auto it = row_by_cap.find(k);
          if (it == row_by_cap.end()) {
            out << " nan";
          } else {
            out << ' ' << (cost ? it->second->total_cost.Format4() : Fixed4(it->second->makespan_min));
          }
        }
        out << '\n';
      }
      Finish(out, path);
      written.push_back(path);
    }
  }
  return written;
}

std::vector<ObservationPoint> ParseObservations(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> column;
  std::vector<ObservationPoint> points;
  std::vector<std::string> problems;
  const std::set<std::string> known = {"batch_size", "strategy", "total_cost", "makespan_min", "concurrency"};

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
    const auto cells = SplitCsv(line);
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    if (column.empty()) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!known.contains(cells[i])) problems.push_back(where + "unknown column '" + cells[i] + "'");
        column[cells[i]] = i;
      }
      for (const char* required : {"batch_size", "strategy", "total_cost"}) {
        if (!column.contains(required)) problems.push_back(where + "missing column '" + required + "'");
      }
      if (!problems.empty()) break;
      continue;
    }
    auto cell = [&](const std::string& name) -> std::string {
      const auto it = column.find(name);
      return it == column.end() || it->second >= cells.size() ? "" : cells[it->second];
    };
    ObservationPoint p;
    try {
      p.batch_size = std::stoll(cell("batch_size"));
      p.total_cost = std::stod(cell("total_cost"));
      if (const auto m = cell("makespan_min"); !m.empty()) p.makespan_min = std::stod(m);
      if (const auto k = cell("concurrency"); !k.empty()) p.concurrency = std::stoll(k);
    } catch (const std::exception&) {
      problems.push_back(where + "malformed number");
      continue;
    }
    if (auto s = ParseStrategy(cell("strategy"))) {
      p.strategy = *s;
    } else {
      problems.push_back(where + "unknown strategy '" + cell("strategy") + "'");
      continue;
    }
    points.push_back(p);
  }
  if (column.empty() && problems.empty()) problems.push_back(source + ": no header row");
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return points;
}

std::vector<ObservationPoint> ReadObservations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read observations from " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseObservations(buf.str(), path.string());
}

std::string CalibrationReportJson(const CalibrationFit& fit) {
  json j;
  j["effective_rate_per_ms"] = fit.effective_rate_per_ms;
  j["effective_rate_per_min"] = fit.effective_rate_per_min();
  j["per_item_time_ms"] = fit.per_item_time_ms;
  j["invocation_overhead_ms"] = fit.invocation_overhead_ms;
  j["per_batch_overhead_ms"] = fit.per_batch_overhead_ms;
  j["monolithic_per_item_time_ms"] = fit.monolithic_per_item_time_ms;
  j["rms_relative_error"] = fit.rms_relative_error;
  j["residuals"] = json::array();
  for (const auto& r : fit.residuals) {
    json e;
    e["batch_size"] = r.observed.batch_size;
    e["strategy"] = ToString(r.observed.strategy);
    if (r.observed.concurrency) e["concurrency"] = *r.observed.concurrency;
    e["observed_cost"] = r.observed.total_cost;
    e["simulated_cost"] = r.simulated_cost;
    e["cost_rel_error"] = r.cost_rel_error;
    if (r.observed.makespan_min) {
      e["observed_makespan_min"] = *r.observed.makespan_min;
      e["simulated_makespan_min"] = *r.simulated_makespan_min;
      e["makespan_rel_error"] = *r.makespan_rel_error;
    }
    j["residuals"].push_back(std::move(e));
  }
  if (fit.tension) {
    const auto& t = *fit.tension;
    j["per_item_tension"] = {
        {"parallel_per_item_ms", t.parallel_per_item_ms},
        {"monolithic_per_item_ms", t.monolithic_per_item_ms},
        {"relative_gap", t.relative_gap},
        {"flagged", t.flagged},
        {"threshold", kTensionThreshold},
        {"shared_model_monolithic_cost_errors", t.shared_model_monolithic_cost_errors},
    };
  }
  j["warnings"] = fit.warnings;
  return j.dump(2);
}

void EmitCalibrationReport(const CalibrationFit& fit, const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  out << CalibrationReportJson(fit) << '\n';
  Finish(out, path);
}

}  // namespace sbsim
