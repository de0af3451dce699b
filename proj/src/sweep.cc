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

#include "sbsim/sweep.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <tuple>

#include "sbsim/errors.hpp"
#include "sbsim/simulator.hpp"

namespace sbsim {
namespace {

auto RowKey(const SweepRow& r) { return std::tuple(r.strategy, r.batch_size, r.concurrency); }

bool InBand(const SweepRow& r, CostBand band) {
  const double c = r.total_cost.ToCurrency();
  return c >= band.lo && c <= band.hi;
}

}  // namespace

SweepRow ToRow(const SimulationResult& result) {
  SweepRow row;
  row.batch_size = result.batch_size;
  row.strategy = result.strategy;
  row.concurrency = result.concurrency;
  row.total_cost = result.cost.total_cost;
  row.makespan_min = result.makespan_min();
  row.invocation_count = result.invocation_count;
  row.compute_cost = result.cost.compute_cost;
  row.orchestration_cost = result.cost.orchestration_cost;
  return row;
}

SweepResult Sweep(const SweepGrid& grid, const StrategyWorkloads& workloads, const ExecutionLimits& limits,
                  const PricingModel& pricing) {
  std::vector<std::int64_t> caps = grid.concurrency;
  if (caps.empty()) caps.push_back(limits.concurrency_limit);
  std::sort(caps.begin(), caps.end());
  caps.erase(std::unique(caps.begin(), caps.end()), caps.end());

  struct Job {
    BatchPlan plan;
    std::int64_t concurrency;
  };
  std::vector<Job> jobs;
  for (const Strategy s : grid.strategies) {
    for (const std::int64_t b : grid.batch_sizes) {
      if (s == Strategy::kMonolithic) {
        jobs.push_back({{b, s}, 1});
      } else {
        for (const std::int64_t k : caps) jobs.push_back({{b, s}, k});
      }
    }
  }

  SweepResult out;
  std::vector<std::pair<SweepRow, SimulationResult>> done;
  for (const Job& job : jobs) {
    ExecutionLimits l = limits;
    l.concurrency_limit = job.concurrency;
    try {
      SimulationResult r = Run(workloads.For(job.plan.strategy), job.plan, l, pricing);
      r.concurrency = job.concurrency;
      done.emplace_back(ToRow(r), std::move(r));
    } catch (const Error& e) {
      out.failures.push_back({job.plan.batch_size, job.plan.strategy, job.concurrency, e.what()});
    }
  }

  std::sort(done.begin(), done.end(), [](const auto& a, const auto& b) { return RowKey(a.first) < RowKey(b.first); });
  done.erase(std::unique(done.begin(), done.end(),
                         [](const auto& a, const auto& b) { return RowKey(a.first) == RowKey(b.first); }),
             done.end());
  for (auto& [row, run] : done) {
    out.rows.push_back(row);
    out.runs.push_back(std::move(run));
  }
  return out;
}

std::vector<SweepRow> ParetoFrontier(const std::vector<SweepRow>& rows) {
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tuple(rows[a].total_cost, rows[a].makespan_min, a) < std::tuple(rows[b].total_cost, rows[b].makespan_min, b);
  });

  // Within a group of equal cost only the fastest rows can survive, and
  // they survive iff every strictly cheaper row is strictly slower.
  std::vector<SweepRow> frontier;
  std::optional<double> best;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && rows[order[j]].total_cost == rows[order[i]].total_cost) ++j;
    const double fastest = rows[order[i]].makespan_min;
    if (!best || fastest < *best) {
      for (std::size_t k = i; k < j && rows[order[k]].makespan_min == fastest; ++k) frontier.push_back(rows[order[k]]);
      best = fastest;
    }
    i = j;
  }
  return frontier;
}

SweepRow Recommend(const std::vector<SweepRow>& rows, const Constraint& constraint) {
  const bool cost_capped = constraint.kind == Constraint::Kind::kMaxCost;
  auto feasible = [&](const SweepRow& r) {
    return cost_capped ? r.total_cost <= constraint.max_cost : r.makespan_min <= constraint.max_makespan_min;
  };
  auto key = [&](const SweepRow& r) {
    const auto cost = static_cast<double>(r.total_cost.nanos());
    return cost_capped ? std::tuple(r.makespan_min, cost, r.invocation_count, r.batch_size)
                       : std::tuple(cost, r.makespan_min, r.invocation_count, r.batch_size);
  };

  const SweepRow* best = nullptr;
  for (const auto& r : rows) {
    if (!feasible(r)) continue;
    if (best == nullptr || key(r) < key(*best)) best = &r;
  }
  if (best == nullptr) {
    std::ostringstream os;
    if (cost_capped) {
      os << "no plan costs at most " << constraint.max_cost.Format4() << " (binding constraint: max_cost)";
    } else {
      os << "no plan finishes within " << constraint.max_makespan_min << " min (binding constraint: max_makespan)";
    }
    throw InfeasibleError(os.str());
  }
  return *best;
}

SpeedupReport MakeSpeedupReport(const std::vector<SweepRow>& rows, CostBand band) {
  const SweepRow* mono = nullptr;
  const SweepRow* par = nullptr;
  for (const auto& r : rows) {
    if (!InBand(r, band)) continue;
    const SweepRow*& slot = r.strategy == Strategy::kMonolithic ? mono : par;
    if (slot == nullptr || r.makespan_min < slot->makespan_min) slot = &r;
  }
  if (mono == nullptr || par == nullptr) {
    std::ostringstream os;
    os << "cost band [" << band.lo << ", " << band.hi << "] contains no " << (mono == nullptr ? "monolithic" : "parallel")
       << " row";
    throw InfeasibleError(os.str());
  }
  SpeedupReport report;
  report.fastest_monolithic = *mono;
  report.fastest_parallel = *par;
  report.reduction_percent = mono->makespan_min > 0.0 ? 100.0 * (1.0 - par->makespan_min / mono->makespan_min) : 0.0;
  return report;
}

}  // namespace sbsim
