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

#include "sbsim/cost.hpp"

#include <cmath>

namespace sbsim {
namespace {

std::int64_t TotalBilledMs(const SimulationResult& result, const PricingModel& pricing) {
  const Millis granularity(pricing.billing_granularity_ms);
  std::int64_t total = 0;
  for (const auto& rec : result.trace) total += BilledDuration(rec.raw_duration(), granularity).count();
  return total;
}

CostBreakdown Breakdown(const SimulationResult& result, const PricingModel& pricing, Money orchestration) {
  CostBreakdown cost;
  cost.billed_ms_total = TotalBilledMs(result, pricing);
  // Billed time is an exact integer sum, so the rate is applied once.
  cost.compute_cost = Money::FromCurrency(static_cast<double>(cost.billed_ms_total) * pricing.compute_rate_per_ms);
  cost.invocation_cost = Money::FromCurrency(pricing.invocation_fee) * static_cast<std::int64_t>(result.trace.size());
  cost.orchestration_cost = orchestration;
  cost.total_cost = cost.compute_cost + cost.invocation_cost + cost.orchestration_cost;
  return cost;
}

}  // namespace

std::int64_t BilledDuration(double raw_ms, std::int64_t granularity_ms) {
  if (raw_ms <= 0.0) return 0;
  const auto g = static_cast<double>(granularity_ms);
  return static_cast<std::int64_t>(std::ceil(raw_ms / g)) * granularity_ms;
}

Millis BilledDuration(Micros raw, Millis granularity) {
  if (raw.count() <= 0) return Millis(0);
  const std::int64_t unit = Micros(granularity).count();
  const std::int64_t units = (raw.count() + unit - 1) / unit;
  return granularity * units;
}

CostBreakdown CostMonolithic(const SimulationResult& result, const PricingModel& pricing) {
  return Breakdown(result, pricing, Money());
}

CostBreakdown CostParallel(const SimulationResult& result, const PricingModel& pricing) {
  const auto tasks = static_cast<std::int64_t>(result.trace.size());
  const Money orchestration = Money::FromCurrency(pricing.transition_fee) * (tasks * pricing.transitions_per_task);
  return Breakdown(result, pricing, orchestration);
}

CostBreakdown Price(const SimulationResult& result, const PricingModel& pricing) {
  return result.strategy == Strategy::kMonolithic ? CostMonolithic(result, pricing) : CostParallel(result, pricing);
}

void ApplyPricing(SimulationResult& result, const PricingModel& pricing) {
  const Millis granularity(pricing.billing_granularity_ms);
  for (auto& rec : result.trace) rec.billed_duration = BilledDuration(rec.raw_duration(), granularity);
  result.cost = Price(result, pricing);
  result.total_billed_ms = result.cost.billed_ms_total;
  result.transition_count =
      result.strategy == Strategy::kParallel ? result.invocation_count * pricing.transitions_per_task : 0;
}

}  // namespace sbsim
