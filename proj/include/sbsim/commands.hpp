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
#include <functional>
#include <iosfwd>
#include <optional>

#include "sbsim/calibration.hpp"
#include "sbsim/config.hpp"

namespace sbsim {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 1,     // config, validation, simulation or I/O failure
  kExitInfeasible = 2,  // no row meets a constraint, or calibration failed
};

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  bool emit_trace = false;
  bool quiet = false;
};

// Output directory: --out, then $SBSIM_OUT_DIR, then output.dir.
std::filesystem::path ResolveOutDir(const CommandOptions& options, const RunConfig& config);

// When the config carries a calibration section, fits it and returns the
// config with the fitted workloads and compute rate substituted.
RunConfig ApplyCalibration(const RunConfig& config, CalibrationFit* fit_out = nullptr);

int CmdSimulate(const CommandOptions& options, std::ostream& out, std::ostream& err);
int CmdSweep(const CommandOptions& options, std::ostream& out, std::ostream& err);
int CmdCalibrate(const CommandOptions& options, std::ostream& out, std::ostream& err);

// Runs `body` and maps any exception to its exit code, reporting on `err`.
int Guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace sbsim
