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

#include "sbsim/model.hpp"

namespace sbsim {

// Smallest multiple of `granularity_ms` that is >= raw_ms; 0 stays 0.
std::int64_t BilledDuration(double raw_ms, std::int64_t granularity_ms);
Millis BilledDuration(Micros raw, Millis granularity);

// Chain cost: sum of billed durations times the compute rate, plus one
// invocation fee per chain link. No orchestration term.
CostBreakdown CostMonolithic(const SimulationResult& result, const PricingModel& pricing);

// Fan-out cost: sum over the n invocations of billed duration times the
// compute rate, plus the orchestration charge n * transitions_per_task *
// transition_fee and n invocation fees.
CostBreakdown CostParallel(const SimulationResult& result, const PricingModel& pricing);

// Dispatches on result.strategy.
CostBreakdown Price(const SimulationResult& result, const PricingModel& pricing);

// Re-bills every trace record at the pricing granularity and fills the
// result's billed totals, transition count and cost breakdown.
void ApplyPricing(SimulationResult& result, const PricingModel& pricing);

}  // namespace sbsim
