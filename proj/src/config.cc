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

#include "sbsim/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sbsim/errors.hpp"

namespace sbsim {
namespace {

std::string At(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  if (mark.is_null()) return "";
  return "line " + std::to_string(mark.line + 1) + ": ";
}

// Reads one mapping section, recording every problem instead of throwing.
class Section {
 public:
  Section(YAML::Node node, std::string path, std::vector<std::string>& problems, std::set<std::string> allowed)
      : node_(std::move(node)), path_(std::move(path)), problems_(problems) {
    if (!node_ || node_.IsNull()) return;
    if (!node_.IsMap()) {
      problems_.push_back(At(node_) + path_ + ": expected a mapping");
      node_ = YAML::Node();
      return;
    }
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key)) problems_.push_back(At(kv.first) + "unknown key '" + Name(key) + "'");
    }
  }

  bool Has(const std::string& key) const { return node_ && node_.IsMap() && node_[key]; }
  YAML::Node Child(const std::string& key) const { return Has(key) ? node_[key] : YAML::Node(); }
  std::string Name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <typename T>
  bool Read(const std::string& key, T& out, bool required = false) {
    if (!Has(key)) {
      if (required) problems_.push_back(Name(key) + ": required key missing");
      return false;
    }
    const YAML::Node value = node_[key];
    try {
      out = value.as<T>();
      return true;
    } catch (const YAML::Exception&) {
      problems_.push_back(At(value) + Name(key) + ": cannot read '" + Scalar(value) + "' as " + TypeName<T>());
      return false;
    }
  }

  template <typename T>
  bool ReadOptional(const std::string& key, std::optional<T>& out) {
    T value{};
    if (!Read(key, value)) return false;
    out = value;
    return true;
  }

 private:
  static std::string Scalar(const YAML::Node& n) { return n.IsScalar() ? n.Scalar() : "<non-scalar>"; }

  template <typename T>
  static const char* TypeName() {
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_integral_v<T>) return "an integer";
    else if constexpr (std::is_floating_point_v<T>) return "a number";
    else if constexpr (std::is_same_v<T, std::string>) return "a string";
    else return "a list";
  }

  YAML::Node node_;
  std::string path_;
  std::vector<std::string>& problems_;
};

const std::set<std::string> kWorkloadKeys = {
    "total_items",           "per_item_time_ms",   "invocation_overhead_ms", "per_batch_overhead_ms",
    "chain_trigger_latency_ms", "dispatch_latency_ms", "memory_used_mb",       "jitter_rel_stddev"};

// Keys a per-strategy override may set.
const std::set<std::string> kOverrideKeys = {"per_item_time_ms",         "invocation_overhead_ms",
                                             "per_batch_overhead_ms",    "chain_trigger_latency_ms",
                                             "dispatch_latency_ms",      "memory_used_mb",
                                             "jitter_rel_stddev"};

void ReadWorkloadFields(Section& s, WorkloadSpec& w) {
  s.Read("per_item_time_ms", w.per_item_time_ms);
  s.Read("invocation_overhead_ms", w.invocation_overhead_ms);
  s.Read("per_batch_overhead_ms", w.per_batch_overhead_ms);
  s.Read("chain_trigger_latency_ms", w.chain_trigger_latency_ms);
  s.Read("dispatch_latency_ms", w.dispatch_latency_ms);
  s.Read("memory_used_mb", w.memory_used_mb);
  s.Read("jitter_rel_stddev", w.jitter_rel_stddev);
}

void AppendPrefixed(std::vector<std::string>& out, const std::string& prefix, std::vector<std::string> items) {
  for (auto& s : items) out.push_back(prefix + s);
}

RunConfig Build(const YAML::Node& root, const std::filesystem::path& base_dir) {
  std::vector<std::string> problems;
  RunConfig cfg;

  Section top(root, "", problems,
              {"workload", "limits", "pricing", "plan", "sweep", "calibration", "output", "seed"});
  const bool calibrating = top.Has("calibration");

  // workload
  Section workload(top.Child("workload"), "workload", problems, [] {
    auto keys = kWorkloadKeys;
    keys.insert("monolithic");
    keys.insert("parallel");
    return keys;
  }());
  WorkloadSpec base;
  workload.Read("total_items", base.total_items, true);
  workload.Read("memory_used_mb", base.memory_used_mb, true);
  workload.Read("per_item_time_ms", base.per_item_time_ms, !calibrating);
  ReadWorkloadFields(workload, base);
  WorkloadSpec mono = base;
  WorkloadSpec par = base;
  Section mono_override(workload.Child("monolithic"), "workload.monolithic", problems, kOverrideKeys);
  ReadWorkloadFields(mono_override, mono);
  Section par_override(workload.Child("parallel"), "workload.parallel", problems, kOverrideKeys);
  ReadWorkloadFields(par_override, par);
  cfg.workloads = {mono, par};
  top.Read("seed", cfg.seed);
  cfg.SetSeed(cfg.seed);

  // limits
  Section limits(top.Child("limits"), "limits", problems,
                 {"max_function_duration_ms", "concurrency_limit", "safety_margin_ms"});
  limits.Read("max_function_duration_ms", cfg.limits.max_function_duration_ms, true);
  limits.Read("concurrency_limit", cfg.limits.concurrency_limit);
  limits.Read("safety_margin_ms", cfg.limits.safety_margin_ms);

  // pricing
  Section pricing(top.Child("pricing"), "pricing", problems,
                  {"compute_rate_per_ms", "memory_alloc_mb", "invocation_fee", "transition_fee",
                   "transitions_per_task", "billing_granularity_ms"});
  pricing.Read("compute_rate_per_ms", cfg.pricing.compute_rate_per_ms, !calibrating);
  pricing.Read("memory_alloc_mb", cfg.pricing.memory_alloc_mb);
  pricing.Read("invocation_fee", cfg.pricing.invocation_fee);
  pricing.Read("transition_fee", cfg.pricing.transition_fee);
  pricing.Read("transitions_per_task", cfg.pricing.transitions_per_task);
  pricing.Read("billing_granularity_ms", cfg.pricing.billing_granularity_ms);

  // plan: list of {batch_size, strategy}
  if (const YAML::Node plans = top.Child("plan"); plans && !plans.IsNull()) {
    if (!plans.IsSequence()) {
      problems.push_back(At(plans) + "plan: expected a list of {batch_size, strategy}");
    } else {
      for (std::size_t i = 0; i < plans.size(); ++i) {
        const std::string name = "plan[" + std::to_string(i) + "]";
        Section entry(plans[i], name, problems, {"batch_size", "strategy"});
        BatchPlan plan;
        std::string strategy;
        entry.Read("batch_size", plan.batch_size, true);
        if (entry.Read("strategy", strategy, true)) {
          if (auto s = ParseStrategy(strategy)) {
            plan.strategy = *s;
          } else {
            problems.push_back(At(plans[i]["strategy"]) + name + ".strategy: unknown strategy '" + strategy + "'");
          }
        }
        if (plan.batch_size < 1) problems.push_back(name + ".batch_size = " + std::to_string(plan.batch_size) + " violates >= 1");
        cfg.plans.push_back(plan);
      }
    }
  }

  // sweep
  if (top.Has("sweep")) {
    Section sweep(top.Child("sweep"), "sweep", problems,
                  {"batch_sizes", "strategies", "concurrency", "speedup_band", "recommend"});
    SweepSection section;
    sweep.Read("batch_sizes", section.grid.batch_sizes, true);
    std::vector<std::string> strategies = {"monolithic", "parallel"};
    sweep.Read("strategies", strategies);
    for (const auto& name : strategies) {
      if (auto s = ParseStrategy(name)) {
        section.grid.strategies.push_back(*s);
      } else {
        problems.push_back("sweep.strategies: unknown strategy '" + name + "'");
      }
    }
    sweep.Read("concurrency", section.grid.concurrency);
    for (const auto b : section.grid.batch_sizes) {
      if (b < 1) problems.push_back("sweep.batch_sizes: entry " + std::to_string(b) + " violates >= 1");
    }
    for (const auto k : section.grid.concurrency) {
      if (k < 1) problems.push_back("sweep.concurrency: entry " + std::to_string(k) + " violates >= 1");
    }
    std::vector<double> band;
    if (sweep.Read("speedup_band", band)) {
      if (band.size() != 2 || band[0] > band[1]) {
        problems.push_back("sweep.speedup_band: expected [lo, hi] with lo <= hi");
      } else {
        section.speedup_band = CostBand{band[0], band[1]};
      }
    }
    Section recommend(sweep.Child("recommend"), "sweep.recommend", problems, {"max_cost", "max_makespan_min"});
    double cap = 0.0;
    const bool by_cost = recommend.Read("max_cost", cap);
    if (by_cost) section.recommend = Constraint::MaxCost(Money::FromCurrency(cap));
    if (recommend.Read("max_makespan_min", cap)) {
      if (by_cost) {
        problems.push_back("sweep.recommend: give either max_cost or max_makespan_min, not both");
      } else {
        section.recommend = Constraint::MaxMakespan(cap);
      }
    }
    cfg.sweep = std::move(section);
  }

  // calibration
  if (calibrating) {
    Section calibration(top.Child("calibration"), "calibration", problems, {"observations", "pin"});
    CalibrationSection section;
    std::string observations;
    if (calibration.Read("observations", observations, true)) {
      section.observations = std::filesystem::absolute(base_dir / observations).lexically_normal();
      if (!std::filesystem::exists(section.observations)) {
        problems.push_back("calibration.observations: file not found: " + section.observations.string());
      }
    }
    Section pin(calibration.Child("pin"), "calibration.pin", problems,
                {"effective_rate_per_ms", "per_item_time_ms", "invocation_overhead_ms", "per_batch_overhead_ms",
                 "monolithic_per_item_time_ms"});
    pin.ReadOptional("effective_rate_per_ms", section.pins.effective_rate_per_ms);
    pin.ReadOptional("per_item_time_ms", section.pins.per_item_time_ms);
    pin.ReadOptional("invocation_overhead_ms", section.pins.invocation_overhead_ms);
    pin.ReadOptional("per_batch_overhead_ms", section.pins.per_batch_overhead_ms);
    pin.ReadOptional("monolithic_per_item_time_ms", section.pins.monolithic_per_item_time_ms);
    cfg.calibration = std::move(section);
  }

  // output
  Section output(top.Child("output"), "output", problems, {"dir", "emit_trace", "emit_plots", "emit_report"});
  std::string dir;
  if (output.Read("dir", dir)) cfg.output.dir = dir;
  output.Read("emit_trace", cfg.output.emit_trace);
  output.Read("emit_plots", cfg.output.emit_plots);
  output.Read("emit_report", cfg.output.emit_report);

  // Cross-field invariants.
  std::vector<std::string> workload_problems = CheckWorkload(cfg.workloads.monolithic);
  if (cfg.workloads.parallel != cfg.workloads.monolithic) {
    AppendPrefixed(workload_problems, "(parallel) ", CheckWorkload(cfg.workloads.parallel));
  }
  for (auto& p : workload_problems) problems.push_back(std::move(p));
  for (auto& p : CheckLimits(cfg.limits)) problems.push_back(std::move(p));
  for (auto& p : CheckPricing(cfg.pricing)) problems.push_back(std::move(p));

  if (!problems.empty()) {
    // Deduplicate while keeping order (missing keys can also fail invariants).
    std::vector<std::string> unique;
    std::set<std::string> seen;
    for (auto& p : problems) {
      if (seen.insert(p).second) unique.push_back(std::move(p));
    }
    throw ConfigError(std::move(unique));
  }
  return cfg;
}

void EmitWorkloadFields(YAML::Emitter& out, const WorkloadSpec& w, const WorkloadSpec* base) {
  auto field = [&](const char* key, double value, double base_value) {
    if (base == nullptr || value != base_value) out << YAML::Key << key << YAML::Value << value;
  };
  field("per_item_time_ms", w.per_item_time_ms, base ? base->per_item_time_ms : 0);
  field("invocation_overhead_ms", w.invocation_overhead_ms, base ? base->invocation_overhead_ms : 0);
  field("per_batch_overhead_ms", w.per_batch_overhead_ms, base ? base->per_batch_overhead_ms : 0);
  field("chain_trigger_latency_ms", w.chain_trigger_latency_ms, base ? base->chain_trigger_latency_ms : 0);
  field("dispatch_latency_ms", w.dispatch_latency_ms, base ? base->dispatch_latency_ms : 0);
  field("memory_used_mb", w.memory_used_mb, base ? base->memory_used_mb : 0);
  field("jitter_rel_stddev", w.jitter_rel_stddev, base ? base->jitter_rel_stddev : 0);
}

}  // namespace

void RunConfig::SetSeed(std::uint64_t s) {
  seed = s;
  workloads.monolithic.seed = s;
  workloads.parallel.seed = s;
}

RunConfig ParseConfigString(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError({"line " + std::to_string(e.mark.line + 1) + ": " + e.msg});
  }
  return Build(root, base_dir);
}

RunConfig ParseConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file " + path.string()});
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return ParseConfigString(buf.str(), path.parent_path());
  } catch (const ConfigError& e) {
    std::vector<std::string> problems;
    for (const auto& p : e.problems()) problems.push_back(path.string() + ": " + p);
    throw ConfigError(std::move(problems));
  }
}

std::string EmitConfig(const RunConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  const WorkloadSpec& base = cfg.workloads.monolithic;
  out << YAML::Key << "workload" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "total_items" << YAML::Value << base.total_items;
  EmitWorkloadFields(out, base, nullptr);
  if (cfg.workloads.parallel != base) {
    WorkloadSpec par = cfg.workloads.parallel;
    par.seed = base.seed;
    out << YAML::Key << "parallel" << YAML::Value << YAML::BeginMap;
    EmitWorkloadFields(out, par, &base);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;

  out << YAML::Key << "limits" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "max_function_duration_ms" << YAML::Value << cfg.limits.max_function_duration_ms;
  out << YAML::Key << "concurrency_limit" << YAML::Value << cfg.limits.concurrency_limit;
  out << YAML::Key << "safety_margin_ms" << YAML::Value << cfg.limits.safety_margin_ms;
  out << YAML::EndMap;

  out << YAML::Key << "pricing" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "compute_rate_per_ms" << YAML::Value << cfg.pricing.compute_rate_per_ms;
  out << YAML::Key << "memory_alloc_mb" << YAML::Value << cfg.pricing.memory_alloc_mb;
  out << YAML::Key << "invocation_fee" << YAML::Value << cfg.pricing.invocation_fee;
  out << YAML::Key << "transition_fee" << YAML::Value << cfg.pricing.transition_fee;
  out << YAML::Key << "transitions_per_task" << YAML::Value << cfg.pricing.transitions_per_task;
  out << YAML::Key << "billing_granularity_ms" << YAML::Value << cfg.pricing.billing_granularity_ms;
  out << YAML::EndMap;

  if (!cfg.plans.empty()) {
    out << YAML::Key << "plan" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : cfg.plans) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "batch_size" << YAML::Value << p.batch_size << YAML::Key
          << "strategy" << YAML::Value << std::string(ToString(p.strategy)) << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }

  if (cfg.sweep) {
    const auto& s = *cfg.sweep;
    out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "batch_sizes" << YAML::Value << YAML::Flow << s.grid.batch_sizes;
    std::vector<std::string> names;
    for (const auto st : s.grid.strategies) names.emplace_back(ToString(st));
    out << YAML::Key << "strategies" << YAML::Value << YAML::Flow << names;
    if (!s.grid.concurrency.empty()) out << YAML::Key << "concurrency" << YAML::Value << YAML::Flow << s.grid.concurrency;
    if (s.speedup_band) {
      out << YAML::Key << "speedup_band" << YAML::Value << YAML::Flow
          << std::vector<double>{s.speedup_band->lo, s.speedup_band->hi};
    }
    if (s.recommend) {
      out << YAML::Key << "recommend" << YAML::Value << YAML::BeginMap;
      if (s.recommend->kind == Constraint::Kind::kMaxCost) {
        out << YAML::Key << "max_cost" << YAML::Value << s.recommend->max_cost.ToCurrency();
      } else {
        out << YAML::Key << "max_makespan_min" << YAML::Value << s.recommend->max_makespan_min;
      }
      out << YAML::EndMap;
    }
    out << YAML::EndMap;
  }

  if (cfg.calibration) {
    const auto& c = *cfg.calibration;
    out << YAML::Key << "calibration" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "observations" << YAML::Value << c.observations.string();
    const std::pair<const char*, const std::optional<double>*> pins[] = {
        {"effective_rate_per_ms", &c.pins.effective_rate_per_ms},
        {"per_item_time_ms", &c.pins.per_item_time_ms},
        {"invocation_overhead_ms", &c.pins.invocation_overhead_ms},
        {"per_batch_overhead_ms", &c.pins.per_batch_overhead_ms},
        {"monolithic_per_item_time_ms", &c.pins.monolithic_per_item_time_ms},
    };
    bool any = false;
    for (const auto& [key, value] : pins) any = any || value->has_value();
    if (any) {
      out << YAML::Key << "pin" << YAML::Value << YAML::BeginMap;
      for (const auto& [key, value] : pins) {
        if (*value) out << YAML::Key << key << YAML::Value << **value;
      }
      out << YAML::EndMap;
    }
    out << YAML::EndMap;
  }

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dir" << YAML::Value << cfg.output.dir.string();
  out << YAML::Key << "emit_trace" << YAML::Value << cfg.output.emit_trace;
  out << YAML::Key << "emit_plots" << YAML::Value << cfg.output.emit_plots;
  out << YAML::Key << "emit_report" << YAML::Value << cfg.output.emit_report;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace sbsim
