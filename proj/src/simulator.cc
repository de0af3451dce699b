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

#include "sbsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sbsim/cost.hpp"
#include "sbsim/errors.hpp"
#include "sbsim/event_queue.hpp"

namespace sbsim {
namespace {

// Actual (possibly jittered) processing time of every batch, in partition
// order, so both strategies consume the RNG identically.
std::vector<Micros> DrawBatchTimes(const std::vector<std::int64_t>& batches, const WorkloadSpec& workload) {
  Rng rng(workload.seed);
  std::vector<Micros> times;
  times.reserve(batches.size());
  for (const std::int64_t items : batches) times.push_back(BatchExecTime(items, workload, rng));
  return times;
}

void RequireValid(const BatchPlan& plan, const WorkloadSpec& workload, const ExecutionLimits& limits) {
  if (auto verdict = ValidatePlan(plan, workload, limits); !verdict.ok()) {
    throw InvalidPlanError(std::move(verdict.violations));
  }
}

void CheckTimeout(const InvocationRecord& rec, Micros timeout) {
  if (rec.raw_duration() <= timeout) return;
  std::ostringstream os;
  os << "invocation " << rec.invocation_id << " ran " << ToMs(rec.raw_duration())
     << " ms, beyond the function timeout of " << ToMs(timeout) << " ms";
  throw SimulationError(os.str());
}

void Summarize(SimulationResult& result, const WorkloadSpec& workload) {
  result.invocation_count = static_cast<std::int64_t>(result.trace.size());
  if (result.trace.empty()) return;
  Micros first = result.trace.front().start;
  Micros last = result.trace.front().end;
  for (auto& rec : result.trace) {
    first = std::min(first, rec.start);
    last = std::max(last, rec.end);
    rec.billed_duration = BilledDuration(rec.raw_duration(), Millis(1));
    result.total_billed_ms += rec.billed_duration.count();
  }
  result.makespan = last - first;
  result.max_memory_mb = workload.memory_used_mb;
}

}  // namespace

Micros NominalBatchTime(std::int64_t items, const WorkloadSpec& workload) {
  return Micros(std::llround(static_cast<double>(items) * workload.per_item_time_ms * 1000.0));
}

Micros BatchExecTime(std::int64_t items, const WorkloadSpec& workload, Rng& rng) {
  if (items <= 0) return Micros(0);
  if (workload.jitter_rel_stddev <= 0.0) return NominalBatchTime(items, workload);
  // Mean-one lognormal: sigma^2 = ln(1 + cv^2), mu = -sigma^2 / 2.
  const double cv = workload.jitter_rel_stddev;
  const double sigma = std::sqrt(std::log1p(cv * cv));
  std::lognormal_distribution<double> factor(-0.5 * sigma * sigma, sigma);
  double total_ms = 0.0;
  for (std::int64_t i = 0; i < items; ++i) total_ms += workload.per_item_time_ms * factor(rng);
  return MicrosFromMs(total_ms);
}

SimulationResult SimulateMonolithic(const WorkloadSpec& workload, const BatchPlan& plan,
                                    const ExecutionLimits& limits) {
  RequireValid(plan, workload, limits);
  const auto batches = Partition(workload.total_items, plan.batch_size);
  const auto actual = DrawBatchTimes(batches, workload);

  const Micros timeout = MicrosFromMs(limits.max_function_duration_ms);
  const Micros margin = MicrosFromMs(limits.safety_margin_ms);
  const Micros overhead = MicrosFromMs(workload.invocation_overhead_ms);
  const Micros batch_overhead = MicrosFromMs(workload.per_batch_overhead_ms);
  const Micros trigger_latency = MicrosFromMs(workload.chain_trigger_latency_ms);

  SimulationResult result;
  result.strategy = Strategy::kMonolithic;
  result.batch_size = plan.batch_size;
  result.concurrency = 1;

  std::size_t next = 0;
  EventQueue events;
  if (!batches.empty()) events.Push(Micros(0), EventKind::kChainTrigger);
  while (!events.empty()) {
    const Event ev = events.Pop();
    if (ev.kind == EventKind::kTaskComplete) {
      if (next < batches.size()) events.Push(ev.time + trigger_latency, EventKind::kChainTrigger);
      continue;
    }

    InvocationRecord rec;
    rec.invocation_id = static_cast<std::int64_t>(result.trace.size());
    rec.start = ev.time;
    rec.memory_used_mb = workload.memory_used_mb;
    Micros elapsed = overhead;
    while (next < batches.size()) {
      // Under jitter the chain can only predict the mean batch time.
      const Micros estimate = batch_overhead + NominalBatchTime(batches[next], workload);
      if (elapsed + estimate + margin > timeout) break;
      elapsed += batch_overhead + actual[next];
      rec.items_processed += batches[next];
      rec.batches_processed.push_back(static_cast<std::int64_t>(next));
      ++next;
    }
    if (rec.batches_processed.empty()) {
      throw SimulationError("monolithic invocation " + std::to_string(rec.invocation_id) +
                            " could not fit batch " + std::to_string(next) + " before its timeout");
    }
    rec.end = rec.start + elapsed;
    CheckTimeout(rec, timeout);
    events.Push(rec.end, EventKind::kTaskComplete, rec.invocation_id);
    result.trace.push_back(std::move(rec));
  }

  Summarize(result, workload);
  return result;
}

SimulationResult SimulateParallel(const WorkloadSpec& workload, const BatchPlan& plan, const ExecutionLimits& limits) {
  RequireValid(plan, workload, limits);
  const auto batches = Partition(workload.total_items, plan.batch_size);
  const auto actual = DrawBatchTimes(batches, workload);

  const Micros timeout = MicrosFromMs(limits.max_function_duration_ms);
  const Micros fixed = MicrosFromMs(workload.invocation_overhead_ms) + MicrosFromMs(workload.per_batch_overhead_ms);
  const Micros dispatch_latency = MicrosFromMs(workload.dispatch_latency_ms);

  SimulationResult result;
  result.strategy = Strategy::kParallel;
  result.batch_size = plan.batch_size;
  result.concurrency = limits.concurrency_limit;
  result.trace.reserve(batches.size());

  EventQueue events;
  const auto initial = std::min<std::size_t>(batches.size(), static_cast<std::size_t>(limits.concurrency_limit));
  for (std::size_t slot = 0; slot < initial; ++slot) {
    events.Push(Micros(0), EventKind::kSlotFree, static_cast<std::int64_t>(slot));
  }

  std::size_t next = 0;
  while (!events.empty()) {
    const Event ev = events.Pop();
    if (ev.kind == EventKind::kTaskComplete) {
      events.Push(ev.time, EventKind::kSlotFree, ev.payload);
      continue;
    }
    if (next >= batches.size()) continue;

    InvocationRecord rec;
    rec.invocation_id = static_cast<std::int64_t>(next);
    rec.start = ev.time + dispatch_latency;
    rec.end = rec.start + fixed + actual[next];
    rec.items_processed = batches[next];
    rec.batches_processed.push_back(static_cast<std::int64_t>(next));
    rec.memory_used_mb = workload.memory_used_mb;
    CheckTimeout(rec, timeout);
    events.Push(rec.end, EventKind::kTaskComplete, ev.payload);
    result.trace.push_back(std::move(rec));
    ++next;
  }

  Summarize(result, workload);
  return result;
}

SimulationResult Run(const WorkloadSpec& workload, const BatchPlan& plan, const ExecutionLimits& limits,
                     const PricingModel& pricing) {
  if (auto problems = CheckPricing(pricing); !problems.empty()) throw InvalidPlanError(std::move(problems));
  SimulationResult result = plan.strategy == Strategy::kMonolithic ? SimulateMonolithic(workload, plan, limits)
                                                                   : SimulateParallel(workload, plan, limits);
  ApplyPricing(result, pricing);
  return result;
}

}  // namespace sbsim
