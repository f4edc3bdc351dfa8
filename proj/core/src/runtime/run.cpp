// Copyright 2026 The flowrt Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flowrt/runtime/run.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <utility>

#include "flowrt/cft/validate.hpp"

namespace flowrt::runtime {

std::string_view to_string(CompileMode m) { return m == CompileMode::jit ? "jit" : "aot"; }

namespace {

void check_config(const cft::Module& m, const RunConfig& cfg) {
  if (cfg.quantum < 1) throw ConfigError("quantum must be at least 1");
  if (cfg.migration && !cfg.migration->valid()) throw ConfigError("migration policy values must be positive");
  const auto report = cft::validate_module(m);
  if (report.has_errors()) {
    for (const auto& f : report.findings) {
      if (f.severity == Severity::error) throw ConfigError("module rejected by validation: " + f.rule + ": " + f.message);
    }
  }
}

Placement initial_placement(const cft::Module& m, const topology::Topology& t, const RunConfig& cfg,
                            std::uint32_t& region) {
  region = 0;
  if (cfg.initial_region) {
    const auto r = t.region_index(*cfg.initial_region);
    if (!r) throw ConfigError("unknown placement region: " + *cfg.initial_region);
    region = static_cast<std::uint32_t>(*r);
  }
  const std::uint64_t bytes = std::uint64_t{m.memory().min_pages} * cft::kWasmPageSize;
  if (bytes > t.region(region).capacity_bytes) {
    throw ConfigError("region " + t.region(region).id + " cannot hold " + std::to_string(bytes) + " bytes");
  }
  return Placement::uniform(bytes / kPlacementPageSize, region);
}

}  // namespace

RunOutcome run_detailed(const cft::Module& m, const topology::Topology& t, const RunConfig& cfg,
                        engine::HostEnv env, bool log) {
  check_config(m, cfg);
  const auto analysis = analysis::analyze_module(m, cfg.ratio_threshold);
  const SchedulePlan plan = schedule(m, t, analysis);

  RunOutcome out;
  RunReport& rep = out.report;
  rep.mode = cfg.mode;
  rep.config = cfg;

  engine::ExecOptions opts;
  opts.device_of_function = device_table(m, t, plan);

  const auto costs = compile_costs(m, t, plan);
  if (cfg.mode == CompileMode::aot) {
    for (const auto& c : costs) rep.totals.aot_compile_ns += c.ns;
  } else {
    auto cache = std::make_shared<std::set<std::pair<std::uint32_t, std::uint32_t>>>();
    opts.compile_charge = [&m, &t, cache](std::uint32_t f, std::uint32_t d) {
      if (!cache->insert({f, d}).second) return 0.0;
      return compile_ns(m, t, f, d);
    };
  }
  if (log) {
    opts.on_access = [&out](const engine::AccessEvent& e) { out.accesses.push_back(e); };
  }

  std::uint32_t region = 0;
  Placement placement = initial_placement(m, t, cfg, region);
  opts.grow_region = region;

  std::optional<engine::Instance> inst;
  try {
    inst.emplace(engine::Instance::instantiate(m, t, std::move(placement), std::move(env), std::move(opts)));
  } catch (const engine::InstantiationError& e) {
    throw ConfigError(e.what());
  }
  out.initial_compile_ns = inst->thread(0).compile_ns;

  std::uint64_t epoch = 0;
  std::uint64_t epoch_executed = 0;
  bool deadlock = false;

  auto end_epoch = [&]() {
    Placement next = inst->placement();
    for (const auto& rec : epoch_migrate(inst->stats(), next, t, *cfg.migration, epoch)) {
      rep.migrations.push_back({rec.epoch, rec.page, t.region(rec.from_region).id, t.region(rec.to_region).id,
                                rec.cost_ns});
      rep.totals.migration_ns += rec.cost_ns;
    }
    inst->set_placement(std::move(next));
    inst->stats().reset();
    ++epoch;
    epoch_executed = 0;
  };

  while (!inst->trap() && !inst->all_finished()) {
    if (!inst->any_runnable()) {
      deadlock = true;
      break;
    }
    for (std::uint32_t tid = 0; tid < inst->thread_count() && !inst->trap(); ++tid) {
      if (inst->thread(tid).status != engine::ThreadStatus::runnable) continue;
      std::uint64_t remaining = cfg.quantum;
      while (remaining > 0) {
        std::uint64_t budget = remaining;
        if (cfg.migration) budget = std::min(budget, cfg.migration->epoch_instructions - epoch_executed);
        const auto o = inst->step_thread(tid, budget);
        if (log) out.steps.push_back({tid, o});
        remaining -= o.executed;
        epoch_executed += o.executed;
        if (cfg.migration && epoch_executed == cfg.migration->epoch_instructions) end_epoch();
        if (o.state != engine::StepOutcome::State::yielded || o.executed < budget) break;
      }
    }
  }

  if (inst->trap()) {
    rep.exit_status = "trap";
    rep.trap = std::string(engine::to_string(*inst->trap()));
    rep.trap_thread = inst->trap_thread();
  } else if (deadlock) {
    rep.exit_status = "deadlock";
  } else {
    rep.exit_status = "ok";
  }
  rep.exit_code = inst->exit_code().value_or(0);

  for (const auto& e : plan.entries) {
    rep.schedule.push_back({m.func_name(e.function), std::string(to_string(e.decided)), t.device(e.device).id,
                            std::string(analysis::to_string(e.source)), e.rationale});
  }

  double latest = 0;
  for (std::uint32_t tid = 0; tid < inst->thread_count(); ++tid) {
    const auto& info = inst->thread(tid);
    ThreadReport tr;
    tr.tid = tid;
    tr.function = m.func_name(info.function);
    tr.device = t.device(info.device).id;
    tr.compute_ns = info.compute_ns;
    tr.memory_stall_ns = info.memory_stall_ns;
    tr.compile_ns = info.compile_ns;
    tr.busy_ns = info.compute_ns + info.memory_stall_ns + info.compile_ns;
    tr.finish_ns = info.clock_ns;
    tr.instructions = info.instructions;
    tr.status = std::string(engine::to_string(info.status));
    tr.result = info.result;
    rep.totals.compute_ns += tr.compute_ns;
    rep.totals.memory_stall_ns += tr.memory_stall_ns;
    rep.totals.compile_ns += tr.compile_ns;
    rep.totals.instructions += tr.instructions;
    latest = std::max(latest, tr.finish_ns);
    rep.threads.push_back(std::move(tr));
  }
  rep.totals.total_simulated_ns = latest + rep.totals.migration_ns;

  out.memory.assign(inst->memory().begin(), inst->memory().end());
  out.globals = inst->globals();
  return out;
}

RunReport run(const cft::Module& m, const topology::Topology& t, const RunConfig& cfg, engine::HostEnv env) {
  return run_detailed(m, t, cfg, std::move(env)).report;
}

}  // namespace flowrt::runtime
