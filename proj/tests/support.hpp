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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "sbsim/model.hpp"
#include "sbsim/simulator.hpp"
#include "sbsim/sweep.hpp"

namespace sbsim::testing {

inline std::filesystem::path SourceDir() { return SBSIM_SOURCE_DIR; }

inline std::filesystem::path ScratchDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sbsim-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline WorkloadSpec Workload(std::int64_t items, double per_item_ms, double overhead_ms = 0.0) {
  WorkloadSpec w;
  w.total_items = items;
  w.per_item_time_ms = per_item_ms;
  w.invocation_overhead_ms = overhead_ms;
  return w;
}

inline ExecutionLimits Limits(double timeout_ms, std::int64_t concurrency = 10, double margin_ms = 0.0) {
  ExecutionLimits l;
  l.max_function_duration_ms = timeout_ms;
  l.concurrency_limit = concurrency;
  l.safety_margin_ms = margin_ms;
  return l;
}

// A random, always-valid simulation input.
struct Case {
  WorkloadSpec workload;
  ExecutionLimits limits;
  BatchPlan plan;
};

class CaseGenerator {
 public:
  explicit CaseGenerator(std::uint64_t seed) : rng_(seed) {}

  double Real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::int64_t Int(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_); }
  bool Coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937_64& rng() { return rng_; }

  // Durations are whole or fractional milliseconds at random so that both
  // exact and rounded paths get exercised.
  double Duration(double hi) {
    const double v = Real(0.0, hi);
    return Coin() ? std::floor(v) : v;
  }

  Case Next(bool jitter = false, std::int64_t max_items = 2000, std::int64_t max_batch = 200) {
    Case c;
    c.workload.total_items = Coin(0.05) ? 0 : Int(1, max_items);
    c.workload.per_item_time_ms = Duration(50.0);
    c.workload.invocation_overhead_ms = Duration(500.0);
    c.workload.per_batch_overhead_ms = Coin() ? 0.0 : Duration(100.0);
    c.workload.chain_trigger_latency_ms = Coin() ? 0.0 : Duration(50.0);
    c.workload.dispatch_latency_ms = Coin() ? 0.0 : Duration(50.0);
    c.workload.memory_used_mb = Real(64.0, 4096.0);
    c.workload.jitter_rel_stddev = jitter ? Real(0.0, 0.5) : 0.0;
    c.workload.seed = rng_();
    c.plan.batch_size = Int(1, max_batch);
    c.plan.strategy = Coin() ? Strategy::kMonolithic : Strategy::kParallel;
    c.limits.concurrency_limit = Int(1, 64);
    c.limits.safety_margin_ms = Coin() ? 0.0 : Duration(200.0);
    const double one_batch = c.workload.invocation_overhead_ms + c.workload.per_batch_overhead_ms +
                             static_cast<double>(c.plan.batch_size) * c.workload.per_item_time_ms;
    c.limits.max_function_duration_ms =
        one_batch + c.limits.safety_margin_ms + 1.0 + Real(0.0, 6.0) * std::max(one_batch, 1.0);
    return c;
  }

 private:
  std::mt19937_64 rng_;
};

// Monolithic chain stepped batch by batch without the event queue.
struct StepInvocation {
  Micros start{0};
  Micros end{0};
  std::vector<std::int64_t> batches;
};

inline std::vector<StepInvocation> StepChain(const WorkloadSpec& w, const BatchPlan& plan, const ExecutionLimits& l) {
  std::vector<std::int64_t> sizes;
  for (std::int64_t left = w.total_items; left > 0; left -= plan.batch_size) {
    sizes.push_back(std::min(left, plan.batch_size));
  }
  const Micros timeout = MicrosFromMs(l.max_function_duration_ms);
  const Micros margin = MicrosFromMs(l.safety_margin_ms);
  const Micros overhead = MicrosFromMs(w.invocation_overhead_ms);
  const Micros per_batch = MicrosFromMs(w.per_batch_overhead_ms);
  const Micros gap = MicrosFromMs(w.chain_trigger_latency_ms);

  std::vector<StepInvocation> chain;
  Micros clock{0};
  std::size_t i = 0;
  while (i < sizes.size()) {
    StepInvocation inv;
    inv.start = clock;
    Micros used = overhead;
    for (; i < sizes.size(); ++i) {
      const Micros cost = per_batch + NominalBatchTime(sizes[i], w);
      if (used + cost + margin > timeout) break;
      used += cost;
      inv.batches.push_back(static_cast<std::int64_t>(i));
    }
    if (inv.batches.empty()) return {};
    inv.end = inv.start + used;
    clock = inv.end + gap;
    chain.push_back(inv);
  }
  return chain;
}

// Parallel list schedule computed from slot free times.
inline Micros ListScheduleMakespan(const WorkloadSpec& w, const BatchPlan& plan, std::int64_t k) {
  std::vector<Micros> durations;
  for (std::int64_t left = w.total_items; left > 0; left -= plan.batch_size) {
    durations.push_back(MicrosFromMs(w.invocation_overhead_ms) + MicrosFromMs(w.per_batch_overhead_ms) +
                        NominalBatchTime(std::min(left, plan.batch_size), w));
  }
  if (durations.empty()) return Micros(0);
  const Micros dispatch = MicrosFromMs(w.dispatch_latency_ms);
  std::vector<Micros> free_at(static_cast<std::size_t>(std::min<std::int64_t>(k, std::ssize(durations))), Micros(0));
  Micros last{0};
  for (const Micros d : durations) {
    auto slot = std::min_element(free_at.begin(), free_at.end());
    *slot += dispatch + d;
    last = std::max(last, *slot);
  }
  return last - dispatch;
}

// Largest number of invocations running at one instant; intervals are
// half-open so back-to-back runs on one slot do not overlap.
inline std::int64_t PeakOverlap(const std::vector<InvocationRecord>& trace) {
  std::vector<std::pair<Micros, int>> edges;
  for (const auto& r : trace) {
    if (r.end == r.start) continue;
    edges.emplace_back(r.start, +1);
    edges.emplace_back(r.end, -1);
  }
  std::sort(edges.begin(), edges.end());
  std::int64_t now = 0;
  std::int64_t peak = 0;
  for (const auto& [t, delta] : edges) {
    now += delta;
    peak = std::max(peak, now);
  }
  return peak;
}

inline bool Dominates(const SweepRow& a, const SweepRow& b) {
  const bool no_worse = a.total_cost <= b.total_cost && a.makespan_min <= b.makespan_min;
  const bool better = a.total_cost < b.total_cost || a.makespan_min < b.makespan_min;
  return no_worse && better;
}

inline std::vector<SweepRow> BruteForceFrontier(const std::vector<SweepRow>& rows) {
  std::vector<SweepRow> kept;
  for (const auto& r : rows) {
    bool dominated = false;
    for (const auto& other : rows) dominated = dominated || Dominates(other, r);
    if (!dominated) kept.push_back(r);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.total_cost < b.total_cost; });
  return kept;
}

// Tables with many exact ties in both metrics.
inline std::vector<SweepRow> RandomTable(CaseGenerator& gen, std::int64_t max_rows = 100) {
  std::vector<SweepRow> rows(static_cast<std::size_t>(gen.Int(0, max_rows)));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& r = rows[i];
    r.batch_size = gen.Int(1, 1000);
    r.strategy = gen.Coin() ? Strategy::kMonolithic : Strategy::kParallel;
    r.concurrency = gen.Int(1, 500);
    r.total_cost = Money::FromNanos(gen.Int(0, 30) * 10'000'000);
    r.makespan_min = static_cast<double>(gen.Int(0, 30)) * 0.5;
    r.invocation_count = gen.Int(0, 500);
    r.compute_cost = r.total_cost;
  }
  return rows;
}

}  // namespace sbsim::testing
