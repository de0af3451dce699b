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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sbsim/calibration.hpp"
#include "sbsim/model.hpp"
#include "sbsim/sweep.hpp"

namespace sbsim {

inline constexpr const char* kCsvHeader =
    "batch_size,strategy,concurrency,total_cost,makespan_min,invocation_count,compute_cost,orchestration_cost";

std::string CsvLine(const SweepRow& row);

// Header plus one line per row. All emitters throw IoError with the path.
void EmitCsv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

// One JSON object per invocation record, one per line.
void EmitTrace(const SimulationResult& result, const std::filesystem::path& path);
std::string TraceLine(const InvocationRecord& record);

// Writes plot_cost_<strategy>.dat and plot_makespan_<strategy>.dat under
// `dir`: whitespace-separated columns aligned on batch size, one value
// column per concurrency level. Returns the files written.
std::vector<std::filesystem::path> EmitPlotData(const std::vector<SweepRow>& rows, const std::filesystem::path& dir);

// Observation table: header naming batch_size, strategy, total_cost and
// optionally makespan_min and concurrency (empty cells allowed for those).
std::vector<ObservationPoint> ReadObservations(const std::filesystem::path& path);
std::vector<ObservationPoint> ParseObservations(const std::string& text, const std::string& source = "<memory>");

std::string CalibrationReportJson(const CalibrationFit& fit);
void EmitCalibrationReport(const CalibrationFit& fit, const std::filesystem::path& path);

std::string TraceFileName(const SimulationResult& result);

}  // namespace sbsim
