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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flowrt/analysis/affinity.hpp"
#include "flowrt/cft/module.hpp"
#include "flowrt/error.hpp"
#include "flowrt/topology/topology.hpp"

namespace flowrt::runtime {

inline constexpr std::string_view kFallbackCpu = "FALLBACK_CPU";

class ScheduleError : public Error {
 public:
  using Error::Error;
};

struct ScheduleEntry {
  std::uint32_t function = 0;
  DeviceClass decided = DeviceClass::cpu;  // class chosen by analysis
  std::uint32_t device = 0;                // index into Topology::devices()
  analysis::DecisionSource source = analysis::DecisionSource::rule;
  std::string rationale;                   // rule id, or FALLBACK_CPU

  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct SchedulePlan {
  std::vector<ScheduleEntry> entries;  // spawnable functions, main first

  const ScheduleEntry* find(std::uint32_t function) const;

  friend bool operator==(const SchedulePlan&, const SchedulePlan&) = default;
};

// Smallest schedulable device id of the class, by string comparison.
std::optional<std::uint32_t> pick_device(const topology::Topology& t, DeviceClass c);

/// Maps each analyzed function onto a device of its decided class, falling
/// back to a cpu. Throws ScheduleError when the topology has no schedulable cpu.
SchedulePlan schedule(const cft::Module& m, const topology::Topology& t,
                      const std::vector<analysis::FunctionAnalysis>& decisions);

// Device per function index, covering helpers with the fallback cpu.
std::vector<std::uint32_t> device_table(const cft::Module& m, const topology::Topology& t, const SchedulePlan& plan);

struct CompileCost {
  std::uint32_t function = 0;
  std::uint32_t device = 0;
  double ns = 0;
};

// closure instr_count(f) x jit_ns_per_instr(device).
double compile_ns(const cft::Module& m, const topology::Topology& t, std::uint32_t function, std::uint32_t device);

// One entry per distinct (function, device) in the plan, in plan order.
std::vector<CompileCost> compile_costs(const cft::Module& m, const topology::Topology& t, const SchedulePlan& plan);

}  // namespace flowrt::runtime
