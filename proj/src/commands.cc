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

#include "sbsim/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "sbsim/errors.hpp"
#include "sbsim/io.hpp"
#include "sbsim/simulator.hpp"
#include "sbsim/sweep.hpp"

namespace sbsim {
namespace {

using nlohmann::json;

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

RunConfig Load(const CommandOptions& options) {
  RunConfig cfg = ParseConfig(options.config);
  if (options.seed) cfg.SetSeed(*options.seed);
  if (options.emit_trace) cfg.output.emit_trace = true;
  return cfg;
}

std::string Describe(const SweepRow& row) {
  return std::string(ToString(row.strategy)) + " b=" + std::to_string(row.batch_size) +
         " k=" + std::to_string(row.concurrency) + ": cost " + row.total_cost.Format4() + ", makespan " +
         Fixed(row.makespan_min, 4) + " min, " + std::to_string(row.invocation_count) + " invocations";
}

json RowJson(const SweepRow& row) {
  return {{"batch_size", row.batch_size},
          {"strategy", ToString(row.strategy)},
          {"concurrency", row.concurrency},
          {"total_cost", row.total_cost.ToCurrency()},
          {"makespan_min", row.makespan_min},
          {"invocation_count", row.invocation_count}};
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::filesystem::path ResolveOutDir(const CommandOptions& options, const RunConfig& config) {
  if (options.out_dir) return *options.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return config.output.dir;
}

RunConfig ApplyCalibration(const RunConfig& config, CalibrationFit* fit_out) {
  if (!config.calibration) return config;
  const auto observations = ReadObservations(config.calibration->observations);
  CalibrationSetup setup{config.workloads.monolithic, config.limits, config.pricing, config.calibration->pins};
  CalibrationFit fit = Calibrate(observations, setup);

  RunConfig calibrated = config;
  calibrated.calibration.reset();
  calibrated.workloads.monolithic = fit.WorkloadFor(Strategy::kMonolithic, config.workloads.monolithic);
  calibrated.workloads.parallel = fit.WorkloadFor(Strategy::kParallel, config.workloads.parallel);
  calibrated.pricing = fit.PricingFrom(config.pricing);
  if (fit_out != nullptr) *fit_out = std::move(fit);
  return calibrated;
}

int Guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const CalibrationError& e) {
    err << "calibration failed: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const InvalidPlanError& e) {
    err << "invalid plan: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

int CmdSimulate(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return Guarded(
      [&] {
        const RunConfig cfg = ApplyCalibration(Load(options));
        if (cfg.plans.empty()) throw ConfigError({"plan: simulate needs at least one entry"});
        const auto dir = ResolveOutDir(options, cfg);

        std::vector<SweepRow> rows;
        for (const auto& plan : cfg.plans) {
          const auto result = Run(cfg.workloads.For(plan.strategy), plan, cfg.limits, cfg.pricing);
          rows.push_back(ToRow(result));
          if (cfg.output.emit_trace) EmitTrace(result, dir / TraceFileName(result));
          if (!options.quiet) out << Describe(rows.back()) << '\n';
        }
        EmitCsv(rows, dir / "simulate.csv");
        if (!options.quiet) out << "wrote " << (dir / "simulate.csv").string() << '\n';
        return static_cast<int>(kExitOk);
      },
      err);
}

int CmdSweep(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return Guarded(
      [&] {
        const RunConfig cfg = ApplyCalibration(Load(options));
        if (!cfg.sweep) throw ConfigError({"sweep: section required for the sweep command"});
        const auto dir = ResolveOutDir(options, cfg);
        const SweepSection& section = *cfg.sweep;

        const SweepResult result = Sweep(section.grid, cfg.workloads, cfg.limits, cfg.pricing);
        const auto frontier = ParetoFrontier(result.rows);
        EmitCsv(result.rows, dir / "sweep.csv");
        EmitCsv(frontier, dir / "frontier.csv");
        if (cfg.output.emit_plots) EmitPlotData(result.rows, dir);
        if (cfg.output.emit_trace) {
          for (const auto& run : result.runs) EmitTrace(run, dir / TraceFileName(run));
        }

        json report;
        report["rows"] = result.rows.size();
        report["frontier"] = json::array();
        for (const auto& row : frontier) report["frontier"].push_back(RowJson(row));
        report["failures"] = json::array();
        for (const auto& f : result.failures) {
          report["failures"].push_back({{"batch_size", f.batch_size},
                                        {"strategy", ToString(f.strategy)},
                                        {"concurrency", f.concurrency},
                                        {"message", f.message}});
          err << "failed: " << ToString(f.strategy) << " b=" << f.batch_size << " k=" << f.concurrency << ": "
              << f.message << '\n';
        }

        if (!options.quiet) {
          out << result.rows.size() << " rows, " << frontier.size() << " on the cost/makespan frontier\n";
          for (const auto& row : frontier) out << "  " << Describe(row) << '\n';
        }

        int code = kExitOk;
        auto finish_report = [&] {
          if (cfg.output.emit_report) WriteText(dir / "sweep_report.json", report.dump(2) + "\n");
        };
        try {
          if (section.speedup_band) {
            const auto s = MakeSpeedupReport(result.rows, *section.speedup_band);
            report["speedup"] = {{"band", {section.speedup_band->lo, section.speedup_band->hi}},
                                 {"reduction_percent", s.reduction_percent},
                                 {"fastest_parallel", RowJson(s.fastest_parallel)},
                                 {"fastest_monolithic", RowJson(s.fastest_monolithic)}};
            if (!options.quiet) {
              out << "makespan reduction in cost band [" << section.speedup_band->lo << ", "
                  << section.speedup_band->hi << "]: " << Fixed(s.reduction_percent, 2) << "%\n";
            }
          }
          if (section.recommend) {
            const auto pick = Recommend(result.rows, *section.recommend);
            report["recommendation"] = RowJson(pick);
            if (!options.quiet) out << "recommended: " << Describe(pick) << '\n';
          }
        } catch (const InfeasibleError& e) {
          report["infeasible"] = e.what();
          finish_report();
          throw;
        }
        finish_report();
        if (!result.failures.empty()) code = kExitInvalid;
        if (!options.quiet) out << "wrote " << (dir / "sweep.csv").string() << '\n';
        return code;
      },
      err);
}

int CmdCalibrate(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return Guarded(
      [&] {
        const RunConfig cfg = Load(options);
        if (!cfg.calibration) throw ConfigError({"calibration: section required for the calibrate command"});
        const auto dir = ResolveOutDir(options, cfg);

        CalibrationFit fit;
        const RunConfig calibrated = ApplyCalibration(cfg, &fit);
        EmitCalibrationReport(fit, dir / "calibration.json");
        WriteText(dir / "calibrated.yaml", EmitConfig(calibrated));

        if (!options.quiet) {
          char line[256];
          std::snprintf(line, sizeof(line), "effective rate: %.6e per ms (%.6e per min)\n", fit.effective_rate_per_ms,
                        fit.effective_rate_per_min());
          out << line;
          out << "per-item time: " << Fixed(fit.per_item_time_ms, 3) << " ms (parallel), "
              << Fixed(fit.monolithic_per_item_time_ms, 3) << " ms (monolithic)\n";
          out << "overhead: " << Fixed(fit.invocation_overhead_ms, 3) << " ms per invocation, "
              << Fixed(fit.per_batch_overhead_ms, 3) << " ms per batch\n";
          for (const auto& r : fit.residuals) {
            out << "  " << ToString(r.observed.strategy) << " b=" << r.observed.batch_size << ": cost "
                << Fixed(r.simulated_cost, 4) << " vs " << Fixed(r.observed.total_cost, 4) << " ("
                << Fixed(100.0 * r.cost_rel_error, 2) << "%)";
            if (r.makespan_rel_error) {
              out << ", makespan " << Fixed(*r.simulated_makespan_min, 2) << " vs "
                  << Fixed(*r.observed.makespan_min, 2) << " min (" << Fixed(100.0 * *r.makespan_rel_error, 2)
                  << "%)";
            }
            out << '\n';
          }
          for (const auto& w : fit.warnings) out << "warning: " << w << '\n';
          out << "wrote " << (dir / "calibration.json").string() << '\n';
        }
        return static_cast<int>(kExitOk);
      },
      err);
}

}  // namespace sbsim
