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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sbsim/calibration.hpp"
#include "sbsim/model.hpp"
#include "sbsim/sweep.hpp"

namespace sbsim {

struct SweepSection {
  SweepGrid grid;
  std::optional<CostBand> speedup_band;
  std::optional<Constraint> recommend;

  bool operator==(const SweepSection&) const = default;
};

struct CalibrationSection {
  std::filesystem::path observations;  // resolved against the config file's directory
  CalibrationPins pins;

  bool operator==(const CalibrationSection&) const = default;
};

struct OutputOptions {
  std::filesystem::path dir = "sbsim-out";
  bool emit_trace = false;
  bool emit_plots = true;
  bool emit_report = true;

  bool operator==(const OutputOptions&) const = default;
};

// Everything a subcommand needs. `workloads` holds the fully resolved
// per-strategy workloads: the `workload` section with any `monolithic` /
// `parallel` overrides applied and `seed` copied in.
struct RunConfig {
  StrategyWorkloads workloads;
  ExecutionLimits limits;
  PricingModel pricing;
  std::vector<BatchPlan> plans;
  std::optional<SweepSection> sweep;
  std::optional<CalibrationSection> calibration;
  OutputOptions output;
  std::uint64_t seed = 0;

  void SetSeed(std::uint64_t s);
  bool operator==(const RunConfig&) const = default;
};

// Reads the YAML config. Unknown keys are rejected; every problem found is
// reported at once, with line numbers where the document provides them.
// workload.per_item_time_ms and pricing.compute_rate_per_ms are required
// unless a calibration section supplies them. Throws ConfigError.
RunConfig ParseConfig(const std::filesystem::path& path);
RunConfig ParseConfigString(const std::string& text, const std::filesystem::path& base_dir = ".");

// Serializes a config that ParseConfig reads back to an equal RunConfig.
std::string EmitConfig(const RunConfig& config);

// Environment variable that overrides output.dir (the --out flag wins).
inline constexpr const char* kOutDirEnv = "SBSIM_OUT_DIR";

}  // namespace sbsim
