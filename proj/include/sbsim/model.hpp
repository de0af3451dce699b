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
#include <string>
#include <string_view>
#include <vector>

#include "sbsim/units.hpp"

namespace sbsim {

enum class Strategy {
  kMonolithic,  // one function chain, self-retriggering before the timeout
  kParallel,    // one function per batch, fan-out under a concurrency cap
};

std::string_view ToString(Strategy s);
std::optional<Strategy> ParseStrategy(std::string_view name);

// Billing rates. A single compute rate applies to the whole run.
struct PricingModel {
  double compute_rate_per_ms = 0.0;  // currency per billed ms at memory_alloc_mb
  double memory_alloc_mb = 1024.0;
  double invocation_fee = 0.0;
  double transition_fee = 0.0;  // per orchestration state transition
  std::int64_t transitions_per_task = 2;
  std::int64_t billing_granularity_ms = 1;

  bool operator==(const PricingModel&) const = default;
};

// Workload physics. Memory is one scalar shared by every invocation.
struct WorkloadSpec {
  std::int64_t total_items = 0;
  double per_item_time_ms = 0.0;
  double invocation_overhead_ms = 0.0;  // cold start + model load, once per invocation
  double per_batch_overhead_ms = 0.0;   // batch fetch/setup, once per batch
  double chain_trigger_latency_ms = 0.0;
  double dispatch_latency_ms = 0.0;
  double memory_used_mb = 1.0;
  double jitter_rel_stddev = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const WorkloadSpec&) const = default;
};

struct ExecutionLimits {
  double max_function_duration_ms = 0.0;  // required; no platform default assumed
  std::int64_t concurrency_limit = 10;
  double safety_margin_ms = 0.0;

  bool operator==(const ExecutionLimits&) const = default;
};

struct BatchPlan {
  std::int64_t batch_size = 1;
  Strategy strategy = Strategy::kParallel;

  bool operator==(const BatchPlan&) const = default;
};

struct InvocationRecord {
  std::int64_t invocation_id = 0;
  Micros start{0};
  Micros end{0};
  std::int64_t items_processed = 0;
  std::vector<std::int64_t> batches_processed;
  Millis billed_duration{0};
  double memory_used_mb = 0.0;

  Micros raw_duration() const { return end - start; }
  bool operator==(const InvocationRecord&) const = default;
};

struct CostBreakdown {
  Money compute_cost;
  Money invocation_cost;
  Money orchestration_cost;
  Money total_cost;
  std::int64_t billed_ms_total = 0;

  bool operator==(const CostBreakdown&) const = default;
};

struct SimulationResult {
  Strategy strategy = Strategy::kParallel;
  std::int64_t batch_size = 0;
  std::int64_t concurrency = 0;
  Micros makespan{0};
  std::int64_t total_billed_ms = 0;
  std::int64_t invocation_count = 0;
  std::int64_t transition_count = 0;
  CostBreakdown cost;
  double max_memory_mb = 0.0;
  std::vector<InvocationRecord> trace;

  double makespan_ms() const { return ToMs(makespan); }
  double makespan_min() const { return ToMinutes(makespan); }
  bool operator==(const SimulationResult&) const = default;
};

// Splits `total_items` into ceil(total/batch_size) batches; only the last may
// be short. Throws InvalidPlanError when batch_size < 1.
std::vector<std::int64_t> Partition(std::int64_t total_items, std::int64_t batch_size);

// Field-level invariant checks. Each returns human-readable violations.
std::vector<std::string> CheckPricing(const PricingModel& pricing);
std::vector<std::string> CheckWorkload(const WorkloadSpec& workload);
std::vector<std::string> CheckLimits(const ExecutionLimits& limits);

struct PlanVerdict {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Accepts a plan iff every invariant holds and one full batch fits inside a
// single invocation (for monolithic chains the safety margin must fit too).
PlanVerdict ValidatePlan(const BatchPlan& plan, const WorkloadSpec& workload, const ExecutionLimits& limits);

}  // namespace sbsim
