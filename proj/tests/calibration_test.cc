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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sbsim/calibration.hpp"
#include "sbsim/errors.hpp"
#include "sbsim/simulator.hpp"
#include "support.hpp"

namespace sbsim {
namespace {

using testing::Limits;
using testing::Workload;

double Rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::vector<ObservationPoint> ReferenceObservations() {
  return {
      {50, Strategy::kMonolithic, 0.2408, 363.5, std::nullopt},
      {1000, Strategy::kMonolithic, 0.2229, 336.5, std::nullopt},
      {50, Strategy::kParallel, 0.3454, 1.01, 500},
      {500, Strategy::kParallel, 0.1838, std::nullopt, 500},
      {625, Strategy::kParallel, 0.1838, std::nullopt, 500},
  };
}

CalibrationSetup ReferenceSetup() {
  CalibrationSetup s;
  s.workload = Workload(25000, 0);
  s.workload.memory_used_mb = 840;
  s.limits = Limits(900000, 500);
  return s;
}

ObservationPoint Observe(const SimulationResult& r, bool with_makespan = true) {
  ObservationPoint p;
  p.batch_size = r.batch_size;
  p.strategy = r.strategy;
  p.total_cost = r.cost.total_cost.ToCurrency();
  if (with_makespan) p.makespan_min = r.makespan_min();
  if (r.strategy == Strategy::kParallel) p.concurrency = r.concurrency;
  return p;
}

TEST(FitEffectiveRateTest, SinglePoints) {
  const std::vector<RatePoint> first = {{363.5, 0.2408}};
  const std::vector<RatePoint> second = {{336.5, 0.2229}};
  EXPECT_NEAR(FitEffectiveRate(first).rate_per_min, 6.6245e-4, 5e-9);
  EXPECT_NEAR(FitEffectiveRate(second).rate_per_min, 6.6241e-4, 5e-9);
  const std::vector<RatePoint> zero = {{1.0, 0.0}};
  EXPECT_EQ(FitEffectiveRate(zero).rate_per_min, 0.0);
}

TEST(FitEffectiveRateTest, ReferencePointsAgree) {
  const std::vector<RatePoint> both = {{363.5, 0.2408}, {336.5, 0.2229}};
  const auto fit = FitEffectiveRate(both);
  EXPECT_LT(fit.relative_spread, 1e-3);
  EXPECT_NEAR(fit.rate_per_min, 6.624e-4, 6.624e-7);
}

TEST(FitEffectiveRateTest, RejectsBadInput) {
  EXPECT_THROW(FitEffectiveRate({}), CalibrationError);
  const std::vector<RatePoint> zero_time = {{0.0, 1.0}};
  EXPECT_THROW(FitEffectiveRate(zero_time), CalibrationError);
}

TEST(FitLatencyModelTest, TwoPointSolve) {
  const std::vector<LatencyPoint> pts = {{50, 57000}, {500, 333000}};
  const auto fit = FitLatencyModel(pts);
  EXPECT_NEAR(fit.per_item_time_ms, 613.333, 1e-3);
  EXPECT_NEAR(fit.invocation_overhead_ms, 26333.33, 1e-2);
  EXPECT_FALSE(fit.clamped);
}

TEST(FitLatencyModelTest, LineThroughOrigin) {
  const std::vector<LatencyPoint> pts = {{1, 10}, {2, 20}};
  const auto fit = FitLatencyModel(pts);
  EXPECT_NEAR(fit.per_item_time_ms, 10.0, 1e-12);
  EXPECT_NEAR(fit.invocation_overhead_ms, 0.0, 1e-12);
}

TEST(FitLatencyModelTest, NeedsDistinctSizes) {
  const std::vector<LatencyPoint> pts = {{10, 100}, {10, 100}};
  EXPECT_THROW(FitLatencyModel(pts), CalibrationError);
}

TEST(FitLatencyModelTest, NegativeOverheadClampsToZero) {
  const std::vector<LatencyPoint> pts = {{1, 5}, {2, 20}};
  const auto fit = FitLatencyModel(pts);
  EXPECT_TRUE(fit.clamped);
  EXPECT_EQ(fit.invocation_overhead_ms, 0.0);
  EXPECT_NEAR(fit.per_item_time_ms, 9.0, 1e-12);
}

TEST(InferBatchExecTest, Examples) {
  EXPECT_NEAR(InferBatchExecFromCost(0.1838, 50, 6.624e-4, 0.0), 5.55, 0.005);
  EXPECT_NEAR(InferBatchExecFromCost(0.3454, 500, 6.624e-4, 0.0), 1.043, 0.0005);
  EXPECT_EQ(InferBatchExecFromCost(0.0, 1, 1e-4, 0.0), 0.0);
}

TEST(InferBatchExecTest, Errors) {
  EXPECT_THROW(InferBatchExecFromCost(0.1, 10, 1e-4, 0.2), CalibrationError);
  EXPECT_THROW(InferBatchExecFromCost(0.1, 10, 0.0, 0.0), CalibrationError);
  EXPECT_THROW(InferBatchExecFromCost(0.1, 0, 1e-4, 0.0), CalibrationError);
}

TEST(CalibrateTest, ReferenceObservations) {
  const auto fit = Calibrate(ReferenceObservations(), ReferenceSetup());
  ASSERT_EQ(fit.residuals.size(), 5u);
  for (const auto& r : fit.residuals) {
    if (r.observed.strategy == Strategy::kMonolithic) {
      EXPECT_LT(std::abs(r.cost_rel_error), 0.005);
    }
  }
  EXPECT_NEAR(fit.effective_rate_per_min(), 6.624e-4, 6.624e-7);
  ASSERT_TRUE(fit.tension.has_value());
  EXPECT_TRUE(fit.tension->flagged);
  EXPECT_GT(fit.tension->relative_gap, kTensionThreshold);
  // Forcing one per-item time onto the chained runs breaks their cost fit.
  for (const double e : fit.tension->shared_model_monolithic_cost_errors) EXPECT_GT(std::abs(e), 0.05);
  EXPECT_GE(fit.per_item_time_ms, 0.0);
  EXPECT_GE(fit.invocation_overhead_ms, 0.0);
}

TEST(CalibrateTest, FullyPinnedNeedsNoObservations) {
  auto setup = ReferenceSetup();
  setup.pins.effective_rate_per_ms = 1.1e-8;
  setup.pins.per_item_time_ms = 600;
  setup.pins.invocation_overhead_ms = 20000;
  setup.pins.per_batch_overhead_ms = 1000;
  setup.pins.monolithic_per_item_time_ms = 800;
  const auto fit = Calibrate({}, setup);
  EXPECT_EQ(fit.effective_rate_per_ms, 1.1e-8);
  EXPECT_EQ(fit.per_item_time_ms, 600);
  EXPECT_EQ(fit.invocation_overhead_ms, 20000);
  EXPECT_EQ(fit.per_batch_overhead_ms, 1000);
  EXPECT_EQ(fit.monolithic_per_item_time_ms, 800);
  EXPECT_TRUE(fit.residuals.empty());
}

TEST(CalibrateTest, SingleChainedPointWithPinnedLatency) {
  auto setup = ReferenceSetup();
  setup.pins.per_item_time_ms = 613;
  setup.pins.invocation_overhead_ms = 26333;
  const std::vector<ObservationPoint> obs = {{1000, Strategy::kMonolithic, 0.2229, 336.5, std::nullopt}};
  const auto fit = Calibrate(obs, setup);
  EXPECT_NEAR(fit.effective_rate_per_min(), 0.2229 / 336.5, 1e-15);
  EXPECT_EQ(fit.residuals.size(), 1u);
}

TEST(CalibrateTest, MissingDataNamesTheParameter) {
  const std::vector<ObservationPoint> obs = {{50, Strategy::kParallel, 0.3, 1.0, 500}};
  try {
    Calibrate(obs, ReferenceSetup());
    FAIL() << "expected CalibrationError";
  } catch (const CalibrationError& e) {
    EXPECT_NE(std::string(e.what()).find("effective_rate_per_ms"), std::string::npos);
  }
  auto setup = ReferenceSetup();
  setup.pins.effective_rate_per_ms = 1e-8;
  EXPECT_THROW(Calibrate(obs, setup), CalibrationError);
}

struct Truth {
  double rate_per_ms;
  double per_item;
  double overhead;
  double per_batch;
  double mono_per_item;
};

std::vector<ObservationPoint> SimulateObservations(const Truth& t, const CalibrationSetup& setup) {
  WorkloadSpec par = setup.workload;
  par.per_item_time_ms = t.per_item;
  par.invocation_overhead_ms = t.overhead;
  par.per_batch_overhead_ms = t.per_batch;
  WorkloadSpec mono = par;
  mono.per_item_time_ms = t.mono_per_item;
  PricingModel pricing = setup.pricing;
  pricing.compute_rate_per_ms = t.rate_per_ms;
  const auto limits = setup.limits;
  return {
      Observe(Run(mono, {50, Strategy::kMonolithic}, limits, pricing)),
      Observe(Run(mono, {1000, Strategy::kMonolithic}, limits, pricing)),
      Observe(Run(par, {50, Strategy::kParallel}, limits, pricing)),
      Observe(Run(par, {500, Strategy::kParallel}, limits, pricing), false),
  };
}

void ExpectRecovered(const CalibrationFit& fit, const Truth& t) {
  EXPECT_LT(Rel(fit.effective_rate_per_ms, t.rate_per_ms), 1e-6);
  EXPECT_LT(Rel(fit.per_item_time_ms, t.per_item), 1e-6);
  EXPECT_LT(Rel(fit.invocation_overhead_ms, t.overhead), 1e-6);
  EXPECT_LT(Rel(fit.monolithic_per_item_time_ms, t.mono_per_item), 1e-6);
  EXPECT_LT(std::abs(fit.per_batch_overhead_ms - t.per_batch), 1e-6 * t.overhead);
}

TEST(CalibrateRoundTrip, SharedPerItemTime) {
  const Truth truth{1.104e-8, 613, 26333, 0, 613};
  const auto setup = ReferenceSetup();
  const auto fit = Calibrate(SimulateObservations(truth, setup), setup);
  ExpectRecovered(fit, truth);
  EXPECT_FALSE(fit.tension->flagged);
  EXPECT_LT(fit.rms_relative_error, 1e-6);
}

TEST(CalibrateRoundTrip, StrategySpecificTimes) {
  const Truth truth{1.2e-8, 600, 25000, 3000, 780};
  auto setup = ReferenceSetup();
  setup.pricing.invocation_fee = 2e-7;
  setup.pricing.transition_fee = 2.5e-5;
  const auto fit = Calibrate(SimulateObservations(truth, setup), setup);
  ExpectRecovered(fit, truth);
  EXPECT_TRUE(fit.tension->flagged);
}

TEST(CalibrateProperty, ScaleEquivariance) {
  const auto base = Calibrate(ReferenceObservations(), ReferenceSetup());
  for (const double c : {0.5, 3.7, 1000.0}) {
    auto obs = ReferenceObservations();
    for (auto& p : obs) p.total_cost *= c;
    const auto fit = Calibrate(obs, ReferenceSetup());
    EXPECT_LT(Rel(fit.effective_rate_per_ms, c * base.effective_rate_per_ms), 1e-12);
    EXPECT_LT(Rel(fit.per_item_time_ms, base.per_item_time_ms), 1e-9);
    EXPECT_LT(Rel(fit.invocation_overhead_ms, base.invocation_overhead_ms), 1e-9);
    EXPECT_LT(Rel(fit.monolithic_per_item_time_ms, base.monolithic_per_item_time_ms), 1e-9);
    EXPECT_LT(Rel(fit.per_batch_overhead_ms, base.per_batch_overhead_ms), 1e-9);
  }
}

}  // namespace
}  // namespace sbsim
