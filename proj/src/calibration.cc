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

#include "sbsim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "sbsim/errors.hpp"
#include "sbsim/simulator.hpp"

namespace sbsim {
namespace {

constexpr double kMsPerMinute = 60'000.0;
constexpr int kMaxIterations = 100;

std::int64_t BatchCount(std::int64_t total_items, std::int64_t batch_size) {
  return (total_items + batch_size - 1) / batch_size;
}

double RelativeError(double simulated, double observed) {
  if (observed == 0.0) return simulated - observed;
  return (simulated - observed) / observed;
}

void CheckObservations(std::span<const ObservationPoint> observations) {
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const auto& p = observations[i];
    const std::string where = "observation " + std::to_string(i) + ": ";
    if (p.batch_size < 1) problems.push_back(where + "batch_size must be >= 1");
    if (!(p.total_cost >= 0.0)) problems.push_back(where + "total_cost must be >= 0");
    if (p.makespan_min && !(*p.makespan_min >= 0.0)) problems.push_back(where + "makespan_min must be >= 0");
    if (p.concurrency && *p.concurrency < 1) problems.push_back(where + "concurrency must be >= 1");
  }
  if (!problems.empty()) {
    std::string msg = "invalid observations:";
    for (const auto& s : problems) msg += "\n  - " + s;
    throw CalibrationError(msg);
  }
}

struct MonolithicPoint {
  std::int64_t batch_size;
  double makespan_ms;
};

// Mutable state of the coupled fit. The fan-out intercept equals
// invocation overhead plus per-batch overhead; the chained fit needs the
// invocation overhead, so the two are iterated to a fixed point.
struct FitState {
  double parallel_per_item = 0.0;
  double intercept = 0.0;
  double overhead = 0.0;
  double per_batch = 0.0;
  double mono_per_item = 0.0;

  bool operator==(const FitState&) const = default;
};

}  // namespace

RateFit FitEffectiveRate(std::span<const RatePoint> points) {
  if (points.empty()) throw CalibrationError("effective rate fit needs at least one (makespan, cost) point");
  RateFit fit;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& p : points) {
    if (!(p.makespan_min > 0.0)) throw CalibrationError("effective rate fit needs makespans > 0");
    sxy += p.makespan_min * p.total_cost;
    sxx += p.makespan_min * p.makespan_min;
    fit.point_rates.push_back(p.total_cost / p.makespan_min);
  }
  fit.rate_per_min = sxy / sxx;
  const auto [lo, hi] = std::minmax_element(fit.point_rates.begin(), fit.point_rates.end());
  fit.relative_spread = *lo > 0.0 ? (*hi - *lo) / *lo : 0.0;
  return fit;
}

LatencyFit FitLatencyModel(std::span<const LatencyPoint> points) {
  std::set<double> sizes;
  for (const auto& p : points) sizes.insert(p.batch_size);
  if (sizes.size() < 2) throw CalibrationError("latency fit needs at least two distinct batch sizes");

  const auto n = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : points) {
    mx += p.batch_size;
    my += p.batch_exec_time_ms;
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& p : points) {
    sxy += (p.batch_size - mx) * (p.batch_exec_time_ms - my);
    sxx += (p.batch_size - mx) * (p.batch_size - mx);
  }

  LatencyFit fit;
  fit.per_item_time_ms = sxy / sxx;
  fit.invocation_overhead_ms = my - fit.per_item_time_ms * mx;
  if (fit.invocation_overhead_ms < 0.0) {
    double origin_xy = 0.0;
    double origin_xx = 0.0;
    for (const auto& p : points) {
      origin_xy += p.batch_size * p.batch_exec_time_ms;
      origin_xx += p.batch_size * p.batch_size;
    }
    fit.invocation_overhead_ms = 0.0;
    fit.per_item_time_ms = origin_xy / origin_xx;
    fit.clamped = true;
  }
  if (fit.per_item_time_ms < 0.0) {
    fit.per_item_time_ms = 0.0;
    fit.invocation_overhead_ms = my;
    fit.clamped = true;
  }
  return fit;
}

double InferBatchExecFromCost(double total_cost, std::int64_t batch_count, double rate_per_min,
                              double orchestration_cost) {
  if (!(rate_per_min > 0.0)) throw CalibrationError("cost inversion needs a positive rate");
  if (batch_count < 1) throw CalibrationError("cost inversion needs at least one batch");
  if (orchestration_cost > total_cost) {
    std::ostringstream os;
    os << "orchestration cost " << orchestration_cost << " exceeds observed total " << total_cost;
    throw CalibrationError(os.str());
  }
  return ((total_cost - orchestration_cost) / static_cast<double>(batch_count)) / rate_per_min;
}

WorkloadSpec CalibrationFit::WorkloadFor(Strategy strategy, const WorkloadSpec& base) const {
  WorkloadSpec w = base;
  w.per_item_time_ms = strategy == Strategy::kMonolithic ? monolithic_per_item_time_ms : per_item_time_ms;
  w.invocation_overhead_ms = invocation_overhead_ms;
  w.per_batch_overhead_ms = per_batch_overhead_ms;
  return w;
}

PricingModel CalibrationFit::PricingFrom(const PricingModel& base) const {
  PricingModel p = base;
  p.compute_rate_per_ms = effective_rate_per_ms;
  return p;
}

CalibrationFit Calibrate(std::span<const ObservationPoint> observations, const CalibrationSetup& setup) {
  CheckObservations(observations);
  const CalibrationPins& pins = setup.pins;
  const std::int64_t total_items = setup.workload.total_items;
  CalibrationFit fit;

  std::vector<MonolithicPoint> mono;
  std::vector<double> mono_costs;
  std::vector<const ObservationPoint*> parallel;
  for (const auto& p : observations) {
    if (p.strategy == Strategy::kParallel) {
      parallel.push_back(&p);
    } else if (p.makespan_min && *p.makespan_min > 0.0) {
      mono.push_back({p.batch_size, *p.makespan_min * kMsPerMinute});
      mono_costs.push_back(p.total_cost);
    }
  }
  if (!pins.effective_rate_per_ms && mono.empty()) {
    throw CalibrationError(
        "no monolithic observation with a makespan to fit the effective rate; pin effective_rate_per_ms");
  }
  if (!parallel.empty() && total_items <= 0) {
    throw CalibrationError("parallel observations need workload.total_items > 0");
  }

  const bool fit_parallel_per_item = !pins.per_item_time_ms;
  const bool fit_overhead = !pins.invocation_overhead_ms;
  if (parallel.empty() && (fit_parallel_per_item || fit_overhead)) {
    if (fit_parallel_per_item && fit_overhead) {
      throw CalibrationError(
          "need two parallel observations with distinct batch sizes, or pin per_item_time_ms and "
          "invocation_overhead_ms");
    }
    throw CalibrationError(std::string("no parallel observations to fit ") +
                           (fit_parallel_per_item ? "per_item_time_ms" : "invocation_overhead_ms"));
  }

  // Chained makespan: y = N t_m + M o + I O + (I - 1) L, with I (chain
  // links) taken from re-simulation under the current estimate. The first
  // pass assumes a single link per run.
  const double trigger = setup.workload.chain_trigger_latency_ms;
  auto links = [&](const FitState& s, std::int64_t batch_size, int iter) -> std::int64_t {
    if (iter == 0) return 1;
    WorkloadSpec w = setup.workload;
    w.per_item_time_ms = s.mono_per_item;
    w.invocation_overhead_ms = s.overhead;
    w.per_batch_overhead_ms = s.per_batch;
    w.jitter_rel_stddev = 0.0;
    try {
      return SimulateMonolithic(w, {batch_size, Strategy::kMonolithic}, setup.limits).invocation_count;
    } catch (const Error& e) {
      throw CalibrationError(std::string("chained re-simulation failed during fitting: ") + e.what());
    }
  };

  FitState state;
  state.per_batch = pins.per_batch_overhead_ms.value_or(0.0);
  state.overhead = pins.invocation_overhead_ms.value_or(0.0);
  state.parallel_per_item = pins.per_item_time_ms.value_or(0.0);
  state.mono_per_item = pins.monolithic_per_item_time_ms.value_or(
      mono.empty() || total_items <= 0 ? state.parallel_per_item : mono.front().makespan_ms / total_items);

  bool clamped_latency = false;
  bool clamped_per_batch = false;
  bool converged = false;
  for (int iter = 0; iter < kMaxIterations && !converged; ++iter) {
    const FitState before = state;
    const double rate_before = fit.effective_rate_per_ms;

    std::vector<double> inv;
    for (const auto& p : mono) inv.push_back(static_cast<double>(links(state, p.batch_size, iter)));

    // Effective rate over billed chain time, net of the chain's invocation
    // fees and unbilled trigger gaps.
    if (pins.effective_rate_per_ms) {
      fit.effective_rate_per_ms = *pins.effective_rate_per_ms;
    } else {
      std::vector<RatePoint> rate_points;
      for (std::size_t i = 0; i < mono.size(); ++i) {
        const double billed_ms = mono[i].makespan_ms - std::max(0.0, inv[i] - 1.0) * trigger;
        rate_points.push_back(
            {billed_ms / kMsPerMinute, mono_costs[i] - inv[i] * setup.pricing.invocation_fee});
      }
      fit.effective_rate_per_ms = FitEffectiveRate(rate_points).rate_per_min / kMsPerMinute;
    }
    const double rate_per_min = fit.effective_rate_per_ms * kMsPerMinute;

    // Fan-out observations become (mean batch size, per-batch time) pairs.
    std::vector<LatencyPoint> latency;
    if (!parallel.empty() && !(rate_per_min > 0.0)) {
      throw CalibrationError("parallel observations need a positive effective rate");
    }
    for (const auto* p : parallel) {
      const std::int64_t batches = BatchCount(total_items, p->batch_size);
      const double non_compute =
          static_cast<double>(batches) *
          (setup.pricing.invocation_fee +
           setup.pricing.transition_fee * static_cast<double>(setup.pricing.transitions_per_task));
      const double minutes = InferBatchExecFromCost(p->total_cost, batches, rate_per_min, non_compute);
      latency.push_back({static_cast<double>(total_items) / static_cast<double>(batches), minutes * kMsPerMinute});
    }

    // Fan-out side.
    if (fit_parallel_per_item && fit_overhead) {
      const LatencyFit free_fit = FitLatencyModel(latency);
      clamped_latency = clamped_latency || free_fit.clamped;
      state.parallel_per_item = free_fit.per_item_time_ms;
      state.intercept = free_fit.invocation_overhead_ms;
      state.overhead = std::max(0.0, state.intercept - state.per_batch);
    } else if (fit_overhead) {
      double sum = 0.0;
      for (const auto& p : latency) sum += p.batch_exec_time_ms - state.parallel_per_item * p.batch_size;
      state.intercept = std::max(0.0, sum / static_cast<double>(latency.size()));
      state.overhead = std::max(0.0, state.intercept - state.per_batch);
    } else {
      state.intercept = state.overhead + state.per_batch;
      if (fit_parallel_per_item) {
        double sxy = 0.0;
        double sxx = 0.0;
        for (const auto& p : latency) {
          sxy += p.batch_size * (p.batch_exec_time_ms - state.intercept);
          sxx += p.batch_size * p.batch_size;
        }
        state.parallel_per_item = std::max(0.0, sxy / sxx);
      }
    }

    // Chained side.
    if (mono.empty() || total_items <= 0) {
      if (!pins.monolithic_per_item_time_ms) state.mono_per_item = state.parallel_per_item;
    } else if (!pins.monolithic_per_item_time_ms || !pins.per_batch_overhead_ms) {
      const auto n = static_cast<double>(total_items);
      std::vector<double> reduced;  // N t_m + M o
      std::vector<double> batches;
      for (std::size_t i = 0; i < mono.size(); ++i) {
        reduced.push_back(mono[i].makespan_ms - inv[i] * state.overhead - std::max(0.0, inv[i] - 1.0) * trigger);
        batches.push_back(static_cast<double>(BatchCount(total_items, mono[i].batch_size)));
      }
      const auto k = static_cast<double>(mono.size());
      const std::set<double> distinct(batches.begin(), batches.end());
      auto per_item_given = [&](double per_batch) {
        double sum = 0.0;
        for (std::size_t i = 0; i < mono.size(); ++i) sum += (reduced[i] - batches[i] * per_batch) / n;
        return sum / k;
      };
      if (pins.monolithic_per_item_time_ms) {
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t i = 0; i < mono.size(); ++i) {
          sxy += batches[i] * (reduced[i] - n * state.mono_per_item);
          sxx += batches[i] * batches[i];
        }
        state.per_batch = sxx > 0.0 ? sxy / sxx : 0.0;
      } else if (!pins.per_batch_overhead_ms && distinct.size() >= 2) {
        const double mb = std::accumulate(batches.begin(), batches.end(), 0.0) / k;
        const double mr = std::accumulate(reduced.begin(), reduced.end(), 0.0) / k;
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t i = 0; i < mono.size(); ++i) {
          sxy += (batches[i] - mb) * (reduced[i] - mr);
          sxx += (batches[i] - mb) * (batches[i] - mb);
        }
        state.per_batch = sxy / sxx;
        state.mono_per_item = (mr - state.per_batch * mb) / n;
      } else {
        state.mono_per_item = per_item_given(state.per_batch);
      }
      if (state.per_batch < 0.0) {
        state.per_batch = 0.0;
        clamped_per_batch = true;
        if (!pins.monolithic_per_item_time_ms) state.mono_per_item = per_item_given(0.0);
      }
      if (state.mono_per_item < 0.0) {
        state.mono_per_item = 0.0;
        fit.warnings.push_back("monolithic per-item fit clamped a negative value to zero");
      }
      if (fit_overhead) state.overhead = std::max(0.0, state.intercept - state.per_batch);
    }
    converged = state == before && fit.effective_rate_per_ms == rate_before;
  }
  if (clamped_latency) fit.warnings.push_back("parallel latency fit clamped a negative coefficient to zero");
  if (!converged) fit.warnings.push_back("coupled fit did not reach a fixed point; last iterate reported");
  if (clamped_per_batch) fit.warnings.push_back("per-batch overhead fit clamped a negative value to zero");

  fit.per_item_time_ms = state.parallel_per_item;
  fit.invocation_overhead_ms = state.overhead;
  fit.per_batch_overhead_ms = state.per_batch;
  fit.monolithic_per_item_time_ms = state.mono_per_item;

  // Residuals under the fitted, strategy-specific workloads.
  const PricingModel pricing = fit.PricingFrom(setup.pricing);
  auto simulate = [&](const ObservationPoint& p, const WorkloadSpec& w) {
    ExecutionLimits limits = setup.limits;
    if (p.concurrency) limits.concurrency_limit = *p.concurrency;
    try {
      return Run(w, {p.batch_size, p.strategy}, limits, pricing);
    } catch (const Error& e) {
      throw CalibrationError(std::string("re-simulation of an observation failed: ") + e.what());
    }
  };
  double squares = 0.0;
  std::size_t terms = 0;
  for (const auto& p : observations) {
    const auto sim = simulate(p, fit.WorkloadFor(p.strategy, setup.workload));
    Residual r;
    r.observed = p;
    r.simulated_cost = sim.cost.total_cost.ToCurrency();
    r.cost_rel_error = RelativeError(r.simulated_cost, p.total_cost);
    squares += r.cost_rel_error * r.cost_rel_error;
    ++terms;
    if (p.makespan_min) {
      r.simulated_makespan_min = sim.makespan_min();
      r.makespan_rel_error = RelativeError(*r.simulated_makespan_min, *p.makespan_min);
      squares += *r.makespan_rel_error * *r.makespan_rel_error;
      ++terms;
    }
    fit.residuals.push_back(std::move(r));
  }
  fit.rms_relative_error = terms > 0 ? std::sqrt(squares / static_cast<double>(terms)) : 0.0;

  if (fit.per_item_time_ms > 0.0 && fit.monolithic_per_item_time_ms != fit.per_item_time_ms) {
    PerItemTension t;
    t.parallel_per_item_ms = fit.per_item_time_ms;
    t.monolithic_per_item_ms = fit.monolithic_per_item_time_ms;
    t.relative_gap = fit.monolithic_per_item_time_ms / fit.per_item_time_ms - 1.0;
    t.flagged = std::abs(t.relative_gap) > kTensionThreshold;
    for (const auto& p : observations) {
      if (p.strategy != Strategy::kMonolithic) continue;
      const auto sim = simulate(p, fit.WorkloadFor(Strategy::kParallel, setup.workload));
      t.shared_model_monolithic_cost_errors.push_back(RelativeError(sim.cost.total_cost.ToCurrency(), p.total_cost));
    }
    if (t.flagged) {
      std::ostringstream os;
      os << "per-item time tension: monolithic runs imply " << t.monolithic_per_item_ms
         << " ms/item but parallel costs imply " << t.parallel_per_item_ms << " ms/item ("
         << t.relative_gap * 100.0 << "% gap); no single workload reproduces both";
      fit.warnings.push_back(os.str());
    }
    fit.tension = std::move(t);
  }
  return fit;
}

}  // namespace sbsim
