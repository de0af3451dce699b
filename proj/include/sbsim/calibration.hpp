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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbsim/model.hpp"

namespace sbsim {

// One measured run. Makespan may be unknown (cost-only observations).
struct ObservationPoint {
  std::int64_t batch_size = 1;
  Strategy strategy = Strategy::kMonolithic;
  double total_cost = 0.0;
  std::optional<double> makespan_min;
  std::optional<std::int64_t> concurrency;

  bool operator==(const ObservationPoint&) const = default;
};

struct RatePoint {
  double makespan_min = 0.0;
  double total_cost = 0.0;
};

struct RateFit {
  double rate_per_min = 0.0;             // least-squares slope through the origin
  std::vector<double> point_rates;       // cost / makespan for each point
  double relative_spread = 0.0;          // (max - min) / min over point_rates
};

// Throws CalibrationError on empty input or a non-positive makespan.
RateFit FitEffectiveRate(std::span<const RatePoint> points);

struct LatencyPoint {
  double batch_size = 0.0;  // mean items per batch
  double batch_exec_time_ms = 0.0;
};

struct LatencyFit {
  double per_item_time_ms = 0.0;
  double invocation_overhead_ms = 0.0;
  bool clamped = false;  // a negative coefficient was forced to zero
};

// Ordinary least squares on time(b) = overhead + b * per_item. Requires at
// least two distinct batch sizes.
LatencyFit FitLatencyModel(std::span<const LatencyPoint> points);

// Per-batch execution time in minutes implied by a fan-out run's cost under
// the equal-batch assumption: ((total - orchestration) / batches) / rate.
double InferBatchExecFromCost(double total_cost, std::int64_t batch_count, double rate_per_min,
                              double orchestration_cost);

struct CalibrationPins {
  std::optional<double> effective_rate_per_ms;
  std::optional<double> per_item_time_ms;
  std::optional<double> invocation_overhead_ms;
  std::optional<double> per_batch_overhead_ms;
  std::optional<double> monolithic_per_item_time_ms;

  bool operator==(const CalibrationPins&) const = default;
};

struct CalibrationSetup {
  WorkloadSpec workload;  // total_items, latencies and memory are taken from here
  ExecutionLimits limits;
  PricingModel pricing;   // fees and granularity; the compute rate is fitted
  CalibrationPins pins;
};

struct Residual {
  ObservationPoint observed;
  double simulated_cost = 0.0;
  double cost_rel_error = 0.0;
  std::optional<double> simulated_makespan_min;
  std::optional<double> makespan_rel_error;
};

// Gap between the per-item time implied by chained runs and the one implied
// by fan-out runs. A single-workload model cannot satisfy both when flagged.
struct PerItemTension {
  double parallel_per_item_ms = 0.0;
  double monolithic_per_item_ms = 0.0;
  double relative_gap = 0.0;  // monolithic / parallel - 1
  bool flagged = false;
  // Monolithic cost residuals when the parallel per-item time is used for
  // both strategies.
  std::vector<double> shared_model_monolithic_cost_errors;
};

inline constexpr double kTensionThreshold = 0.05;

struct CalibrationFit {
  double effective_rate_per_ms = 0.0;
  double per_item_time_ms = 0.0;
  double invocation_overhead_ms = 0.0;
  double per_batch_overhead_ms = 0.0;
  double monolithic_per_item_time_ms = 0.0;
  std::vector<Residual> residuals;
  double rms_relative_error = 0.0;
  std::optional<PerItemTension> tension;
  std::vector<std::string> warnings;

  double effective_rate_per_min() const { return effective_rate_per_ms * 60'000.0; }

  // `base` with the fitted latency parameters for the given strategy.
  WorkloadSpec WorkloadFor(Strategy strategy, const WorkloadSpec& base) const;
  PricingModel PricingFrom(const PricingModel& base) const;
};

// Fits the effective rate from chained observations, the fan-out latency
// model from parallel costs, and the chained per-item/per-batch times from
// chained makespans, then re-simulates every observation. Pinned values
// bypass the corresponding fit.
CalibrationFit Calibrate(std::span<const ObservationPoint> observations, const CalibrationSetup& setup);

}  // namespace sbsim
