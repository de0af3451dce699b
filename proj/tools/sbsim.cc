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

#include <iostream>

#include "CLI11.hpp"
#include "sbsim/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event cost and makespan simulator for serverless batch inference"};
  app.require_subcommand(1);

  sbsim::CommandOptions options;
  std::string out_dir;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", options.config, "YAML run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides SBSIM_OUT_DIR and output.dir)");
    sub->add_option("--seed", seed, "jitter seed (overrides the config)");
    sub->add_flag("--emit-trace", options.emit_trace, "write per-invocation JSONL traces");
    sub->add_flag("--quiet", options.quiet, "suppress the summary on stdout");
  };
  auto* simulate = app.add_subcommand("simulate", "run each configured plan once");
  auto* sweep = app.add_subcommand("sweep", "run the batch size x strategy x concurrency grid");
  auto* calibrate = app.add_subcommand("calibrate", "fit model parameters to observed runs");
  for (auto* sub : {simulate, sweep, calibrate}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sbsim::kExitInvalid;
  }

  for (auto* sub : {simulate, sweep, calibrate}) {
    if (sub->count("--out") > 0) options.out_dir = out_dir;
    if (sub->count("--seed") > 0) options.seed = seed;
  }

  if (simulate->parsed()) return sbsim::CmdSimulate(options, std::cout, std::cerr);
  if (sweep->parsed()) return sbsim::CmdSweep(options, std::cout, std::cerr);
  return sbsim::CmdCalibrate(options, std::cout, std::cerr);
}
