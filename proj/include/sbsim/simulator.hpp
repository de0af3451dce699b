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
#include <random>
#include <vector>

#include "sbsim/model.hpp"

namespace sbsim {

using Rng = std::mt19937_64;

// Mean processing time of `items` items, without any overhead.
Micros NominalBatchTime(std::int64_t items, const WorkloadSpec& workload);

// Processing time of one batch. Deterministic when jitter_rel_stddev == 0
// (the RNG is not touched); otherwise every item's time is scaled by an
// independent mean-one lognormal factor with the configured relative stddev.
Micros BatchExecTime(std::int64_t items, const WorkloadSpec& workload, Rng& rng);

// Single self-retriggering function chain. Before each batch an invocation
// checks elapsed + estimated batch time + safety margin against the timeout
// and hands over to a fresh invocation when the next batch would not fit.
// Costs are left zero; see Run().
SimulationResult SimulateMonolithic(const WorkloadSpec& workload, const BatchPlan& plan,
                                    const ExecutionLimits& limits);

// Greedy list scheduling of one invocation per batch onto
// limits.concurrency_limit slots, in partition order.
SimulationResult SimulateParallel(const WorkloadSpec& workload, const BatchPlan& plan, const ExecutionLimits& limits);

// Validates, simulates the plan's strategy and prices the trace.
SimulationResult Run(const WorkloadSpec& workload, const BatchPlan& plan, const ExecutionLimits& limits,
                     const PricingModel& pricing);

}  // namespace sbsim
