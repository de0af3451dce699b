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

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>

namespace sbsim {

// Simulated wall-clock time. Integer microseconds keep billing rounding exact.
using Micros = std::chrono::duration<std::int64_t, std::micro>;
using Millis = std::chrono::duration<std::int64_t, std::milli>;

// Far beyond any simulated horizon, yet small enough that sums of a few
// such values cannot overflow.
inline constexpr Micros kUnbounded{INT64_MAX / 8};

// Converts a (possibly fractional) millisecond value to the simulation
// clock, rounding to the nearest microsecond and saturating at kUnbounded.
Micros MicrosFromMs(double ms);

inline double ToMs(Micros d) { return static_cast<double>(d.count()) / 1000.0; }
inline double ToMinutes(Micros d) { return static_cast<double>(d.count()) / 60'000'000.0; }

// Currency held as an integer count of nano-units so that sums across
// hundreds of invocations never drift and `total == sum of parts` is exact.
class Money {
 public:
  static constexpr std::int64_t kNanosPerUnit = 1'000'000'000;

  constexpr Money() = default;
  static constexpr Money FromNanos(std::int64_t nanos) { return Money(nanos); }
  static Money FromCurrency(double amount);

  constexpr std::int64_t nanos() const { return nanos_; }
  double ToCurrency() const { return static_cast<double>(nanos_) / static_cast<double>(kNanosPerUnit); }

  // Fixed 4-decimal rendering (half-up on the integer value), e.g. "0.3454".
  std::string Format4() const;

  constexpr Money operator+(Money o) const { return Money(nanos_ + o.nanos_); }
  constexpr Money operator-(Money o) const { return Money(nanos_ - o.nanos_); }
  constexpr Money& operator+=(Money o) {
    nanos_ += o.nanos_;
    return *this;
  }
  constexpr Money operator*(std::int64_t k) const { return Money(nanos_ * k); }
  constexpr auto operator<=>(const Money&) const = default;

 private:
  constexpr explicit Money(std::int64_t nanos) : nanos_(nanos) {}
  std::int64_t nanos_ = 0;
};

}  // namespace sbsim
