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

#include "json.hpp"

namespace flowrt::runtime {

std::string report_to_json(const RunReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["mode"] = std::string(to_string(r.mode));

  ordered_json cfg;
  cfg["quantum"] = r.config.quantum;
  cfg["seed"] = r.config.seed;
  cfg["placement"] = r.config.initial_region ? ordered_json(*r.config.initial_region) : ordered_json(nullptr);
  if (r.config.migration) {
    cfg["migration"] = {{"epoch_instructions", r.config.migration->epoch_instructions},
                        {"hot_threshold", r.config.migration->hot_threshold},
                        {"fixed_overhead_ns", r.config.migration->fixed_overhead_ns}};
  } else {
    cfg["migration"] = nullptr;
  }
  j["config"] = cfg;

  ordered_json exit;
  exit["status"] = r.exit_status;
  exit["trap"] = r.trap ? ordered_json(*r.trap) : ordered_json(nullptr);
  exit["trap_thread"] = r.trap_thread ? ordered_json(*r.trap_thread) : ordered_json(nullptr);
  exit["code"] = r.exit_code;
  j["exit"] = exit;

  ordered_json sched = ordered_json::array();
  for (const auto& s : r.schedule) {
    sched.push_back({{"function", s.function},
                     {"device_class", s.device_class},
                     {"device", s.device},
                     {"source", s.source},
                     {"rationale", s.rationale}});
  }
  j["schedule"] = sched;

  ordered_json threads = ordered_json::array();
  for (const auto& t : r.threads) {
    ordered_json o;
    o["tid"] = t.tid;
    o["function"] = t.function;
    o["device"] = t.device;
    o["compute_ns"] = t.compute_ns;
    o["memory_stall_ns"] = t.memory_stall_ns;
    o["compile_ns"] = t.compile_ns;
    o["busy_ns"] = t.busy_ns;
    o["finish_ns"] = t.finish_ns;
    o["instructions"] = t.instructions;
    o["status"] = t.status;
    o["result"] = t.result ? ordered_json(*t.result) : ordered_json(nullptr);
    threads.push_back(std::move(o));
  }
  j["threads"] = threads;

  ordered_json migrations = ordered_json::array();
  for (const auto& mg : r.migrations) {
    migrations.push_back({{"epoch", mg.epoch},
                          {"page", mg.page},
                          {"from_region", mg.from_region},
                          {"to_region", mg.to_region},
                          {"cost_ns", mg.cost_ns}});
  }
  j["migrations"] = migrations;

  ordered_json totals;
  totals["compute_ns"] = r.totals.compute_ns;
  totals["memory_stall_ns"] = r.totals.memory_stall_ns;
  totals["compile_ns"] = r.totals.compile_ns;
  totals["aot_compile_ns"] = r.totals.aot_compile_ns;
  totals["migration_ns"] = r.totals.migration_ns;
  totals["instructions"] = r.totals.instructions;
  totals["total_simulated_ns"] = r.totals.total_simulated_ns;
  j["totals"] = totals;
  return j.dump(2) + "\n";
}

}  // namespace flowrt::runtime
