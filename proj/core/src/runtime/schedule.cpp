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

#include "flowrt/runtime/schedule.hpp"

namespace flowrt::runtime {

const ScheduleEntry* SchedulePlan::find(std::uint32_t function) const {
  for (const auto& e : entries) {
    if (e.function == function) return &e;
  }
  return nullptr;
}

std::optional<std::uint32_t> pick_device(const topology::Topology& t, DeviceClass c) {
  std::optional<std::uint32_t> best;
  for (std::uint32_t d = 0; d < t.devices().size(); ++d) {
    const auto& dev = t.device(d);
    if (!dev.schedulable() || dev.device_class != c) continue;
    if (!best || dev.id < t.device(*best).id) best = d;
  }
  return best;
}

SchedulePlan schedule(const cft::Module& m, const topology::Topology& t,
                      const std::vector<analysis::FunctionAnalysis>& decisions) {
  (void)m;
  const auto cpu = pick_device(t, DeviceClass::cpu);
  if (!cpu) throw ScheduleError("NoSchedulableDevice: topology has no schedulable cpu device");
  SchedulePlan plan;
  for (const auto& a : decisions) {
    ScheduleEntry e;
    e.function = a.function;
    e.decided = a.decision.device_class;
    e.source = a.decision.source;
    if (const auto d = pick_device(t, a.decision.device_class)) {
      e.device = *d;
      e.rationale = a.decision.rationale;
    } else {
      e.device = *cpu;
      e.rationale = std::string(kFallbackCpu);
    }
    plan.entries.push_back(std::move(e));
  }
  return plan;
}

std::vector<std::uint32_t> device_table(const cft::Module& m, const topology::Topology& t, const SchedulePlan& plan) {
  const auto cpu = pick_device(t, DeviceClass::cpu);
  if (!cpu) throw ScheduleError("NoSchedulableDevice: topology has no schedulable cpu device");
  std::vector<std::uint32_t> table(m.function_count(), *cpu);
  for (const auto& e : plan.entries) table.at(e.function) = e.device;
  return table;
}

}  // namespace flowrt::runtime
