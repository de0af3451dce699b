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
#include <limits>
#include <string>
#include <vector>

#include "sbsim/model.hpp"

namespace sbsim {

struct SweepRow {
  std::int64_t batch_size = 0;
  Strategy strategy = Strategy::kMonolithic;
  std::int64_t concurrency = 1;
  Money total_cost;
  double makespan_min = 0.0;
  std::int64_t invocation_count = 0;
  Money compute_cost;
  Money orchestration_cost;

  bool operator==(const SweepRow&) const = default;
};

// Workload per strategy. The two differ only when a calibration found that
// chained and fan-out observations imply different per-item times.
struct StrategyWorkloads {
  WorkloadSpec monolithic;
  WorkloadSpec parallel;

  static StrategyWorkloads Same(const WorkloadSpec& w) { return {w, w}; }
  const WorkloadSpec& For(Strategy s) const { return s == Strategy::kMonolithic ? monolithic : parallel; }
  bool operator==(const StrategyWorkloads&) const = default;
};

struct SweepGrid {
  std::vector<std::int64_t> batch_sizes;
  std::vector<Strategy> strategies;
  std::vector<std::int64_t> concurrency;  // empty: use limits.concurrency_limit

  bool operator==(const SweepGrid&) const = default;
};

struct SweepFailure {
  std::int64_t batch_size = 0;
  Strategy strategy = Strategy::kMonolithic;
  std::int64_t concurrency = 0;
  std::string message;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by (strategy, batch_size, concurrency)
  std::vector<SimulationResult> runs;  // runs[i] produced rows[i]
  std::vector<SweepFailure> failures;
};

SweepRow ToRow(const SimulationResult& result);

// Runs every combination; a chain ignores concurrency, so monolithic plans
// yield one row per batch size (concurrency 1). Failing combinations are
// reported in `failures` and do not stop the others.
SweepResult Sweep(const SweepGrid& grid, const StrategyWorkloads& workloads, const ExecutionLimits& limits,
                  const PricingModel& pricing);

// Rows not strictly dominated in (total_cost, makespan_min), cost ascending,
// input order among equal costs.
std::vector<SweepRow> ParetoFrontier(const std::vector<SweepRow>& rows);

struct Constraint {
  enum class Kind { kMaxCost, kMaxMakespan };
  Kind kind = Kind::kMaxCost;
  Money max_cost;
  double max_makespan_min = std::numeric_limits<double>::infinity();

  static Constraint MaxCost(Money cost) { return {Kind::kMaxCost, cost, 0.0}; }
  static Constraint MaxMakespan(double minutes) { return {Kind::kMaxMakespan, Money(), minutes}; }
  bool operator==(const Constraint&) const = default;
};

// Cheapest row within a makespan cap, or fastest row within a cost cap.
// Ties break on the other metric, then invocation count, then batch size.
// Throws InfeasibleError naming the constraint when nothing qualifies.
SweepRow Recommend(const std::vector<SweepRow>& rows, const Constraint& constraint);

struct CostBand {
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const CostBand&) const = default;
};

struct SpeedupReport {
  double reduction_percent = 0.0;
  SweepRow fastest_parallel;
  SweepRow fastest_monolithic;
};

// 100 * (1 - fastest parallel / fastest monolithic) among rows whose total
// cost lies in [lo, hi]. Throws InfeasibleError naming an empty strategy.
SpeedupReport MakeSpeedupReport(const std::vector<SweepRow>& rows, CostBand band);

}  // namespace sbsim
