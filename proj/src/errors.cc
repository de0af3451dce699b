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

#include "sbsim/errors.hpp"

namespace sbsim {
namespace {

std::string Join(const std::string& head, const std::vector<std::string>& items) {
  std::string out = head;
  for (const auto& item : items) {
    out += "\n  - ";
    out += item;
  }
  return out;
}

}  // namespace

InvalidPlanError::InvalidPlanError(std::vector<std::string> violations)
    : Error(Join("invalid plan:", violations)), violations_(std::move(violations)) {}

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(Join("invalid configuration:", problems)), problems_(std::move(problems)) {}

}  // namespace sbsim
