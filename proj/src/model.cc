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

#include "sbsim/model.hpp"

#include <cmath>
#include <sstream>

#include "sbsim/errors.hpp"
#include "sbsim/simulator.hpp"

namespace sbsim {
namespace {

template <typename T>
std::string Describe(std::string_view field, T value, std::string_view rule) {
  std::ostringstream os;
  os << field << " = " << value << " violates " << rule;
  return os.str();
}

void RequireNonNegative(std::vector<std::string>& out, std::string_view field, double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) out.push_back(Describe(field, value, ">= 0"));
}

void RequirePositive(std::vector<std::string>& out, std::string_view field, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) out.push_back(Describe(field, value, "> 0"));
}

}  // namespace

std::string_view ToString(Strategy s) {
  switch (s) {
    case Strategy::kMonolithic:
      return "monolithic";
    case Strategy::kParallel:
      return "parallel";
  }
  return "unknown";
}

std::optional<Strategy> ParseStrategy(std::string_view name) {
  if (name == "monolithic") return Strategy::kMonolithic;
  if (name == "parallel") return Strategy::kParallel;
  return std::nullopt;
}

std::vector<std::int64_t> Partition(std::int64_t total_items, std::int64_t batch_size) {
  if (batch_size < 1) throw InvalidPlanError({Describe("batch_size", batch_size, ">= 1")});
  if (total_items < 0) throw InvalidPlanError({Describe("total_items", total_items, ">= 0")});
  std::vector<std::int64_t> batches(static_cast<std::size_t>(total_items / batch_size), batch_size);
  if (const std::int64_t rest = total_items % batch_size; rest > 0) batches.push_back(rest);
  return batches;
}

std::vector<std::string> CheckPricing(const PricingModel& p) {
  std::vector<std::string> out;
  RequireNonNegative(out, "pricing.compute_rate_per_ms", p.compute_rate_per_ms);
  RequirePositive(out, "pricing.memory_alloc_mb", p.memory_alloc_mb);
  RequireNonNegative(out, "pricing.invocation_fee", p.invocation_fee);
  RequireNonNegative(out, "pricing.transition_fee", p.transition_fee);
  if (p.transitions_per_task < 0) out.push_back(Describe("pricing.transitions_per_task", p.transitions_per_task, ">= 0"));
  if (p.billing_granularity_ms < 1) {
    out.push_back(Describe("pricing.billing_granularity_ms", p.billing_granularity_ms, ">= 1"));
  }
  return out;
}

std::vector<std::string> CheckWorkload(const WorkloadSpec& w) {
  std::vector<std::string> out;
  if (w.total_items < 0) out.push_back(Describe("workload.total_items", w.total_items, ">= 0"));
  RequireNonNegative(out, "workload.per_item_time_ms", w.per_item_time_ms);
  RequireNonNegative(out, "workload.invocation_overhead_ms", w.invocation_overhead_ms);
  RequireNonNegative(out, "workload.per_batch_overhead_ms", w.per_batch_overhead_ms);
  RequireNonNegative(out, "workload.chain_trigger_latency_ms", w.chain_trigger_latency_ms);
  RequireNonNegative(out, "workload.dispatch_latency_ms", w.dispatch_latency_ms);
  RequirePositive(out, "workload.memory_used_mb", w.memory_used_mb);
  if (!(w.jitter_rel_stddev >= 0.0 && w.jitter_rel_stddev < 1.0)) {
    out.push_back(Describe("workload.jitter_rel_stddev", w.jitter_rel_stddev, "0 <= x < 1"));
  }
  return out;
}

std::vector<std::string> CheckLimits(const ExecutionLimits& l) {
  std::vector<std::string> out;
  // An infinite timeout is allowed: the chain then never splits.
  if (!(l.max_function_duration_ms > 0.0)) {
    out.push_back(Describe("limits.max_function_duration_ms", l.max_function_duration_ms, "> 0"));
  }
  if (l.concurrency_limit < 1) out.push_back(Describe("limits.concurrency_limit", l.concurrency_limit, ">= 1"));
  RequireNonNegative(out, "limits.safety_margin_ms", l.safety_margin_ms);
  return out;
}

PlanVerdict ValidatePlan(const BatchPlan& plan, const WorkloadSpec& workload, const ExecutionLimits& limits) {
  PlanVerdict verdict;
  auto& v = verdict.violations;
  if (plan.batch_size < 1) v.push_back(Describe("plan.batch_size", plan.batch_size, ">= 1"));
  for (auto& s : CheckWorkload(workload)) v.push_back(std::move(s));
  for (auto& s : CheckLimits(limits)) v.push_back(std::move(s));
  if (!v.empty()) return verdict;

  const Micros timeout = MicrosFromMs(limits.max_function_duration_ms);
  const Micros one_batch = MicrosFromMs(workload.invocation_overhead_ms) + MicrosFromMs(workload.per_batch_overhead_ms) +
                           NominalBatchTime(plan.batch_size, workload);
  if (one_batch > timeout) {
    std::ostringstream os;
    os << "a single batch of " << plan.batch_size << " items needs " << ToMs(one_batch)
       << " ms including overhead, exceeding max_function_duration_ms = " << limits.max_function_duration_ms;
    v.push_back(os.str());
  } else if (plan.strategy == Strategy::kMonolithic && one_batch + MicrosFromMs(limits.safety_margin_ms) > timeout) {
    std::ostringstream os;
    os << "monolithic chain cannot fit one batch (" << ToMs(one_batch) << " ms) plus safety_margin_ms = "
       << limits.safety_margin_ms << " inside max_function_duration_ms = " << limits.max_function_duration_ms;
    v.push_back(os.str());
  }
  return verdict;
}

}  // namespace sbsim
