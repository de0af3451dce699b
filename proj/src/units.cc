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

#include "sbsim/units.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace sbsim {

Micros MicrosFromMs(double ms) {
  const double us = ms * 1000.0;
  if (us >= static_cast<double>(kUnbounded.count())) return kUnbounded;
  return Micros(std::llround(us));
}

Money Money::FromCurrency(double amount) {
  return Money(std::llround(amount * static_cast<double>(kNanosPerUnit)));
}

std::string Money::Format4() const {
  constexpr std::int64_t kStep = kNanosPerUnit / 10'000;
  const bool negative = nanos_ < 0;
  const std::int64_t magnitude = negative ? -nanos_ : nanos_;
  const std::int64_t ticks = (magnitude + kStep / 2) / kStep;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s%lld.%04lld", negative && ticks != 0 ? "-" : "",
                static_cast<long long>(ticks / 10'000), static_cast<long long>(ticks % 10'000));
  return buf;
}

}  // namespace sbsim
