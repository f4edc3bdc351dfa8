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

#include <algorithm>

#include "flowrt/analysis/call_graph.hpp"
#include "flowrt/analysis/profile.hpp"
#include "flowrt/runtime/schedule.hpp"

namespace flowrt::runtime {

double compile_ns(const cft::Module& m, const topology::Topology& t, std::uint32_t function, std::uint32_t device) {
  const auto g = analysis::build_call_graph(m);
  const auto p = analysis::profile_function(m, function, g);
  return static_cast<double>(p.instr_count) * t.device(device).jit_ns_per_instr.value_or(0.0);
}

std::vector<CompileCost> compile_costs(const cft::Module& m, const topology::Topology& t, const SchedulePlan& plan) {
  const auto g = analysis::build_call_graph(m);
  std::vector<CompileCost> out;
  for (const auto& e : plan.entries) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const CompileCost& c) {
      return c.function == e.function && c.device == e.device;
    });
    if (seen) continue;
    const auto p = analysis::profile_function(m, e.function, g);
    out.push_back({e.function, e.device,
                   static_cast<double>(p.instr_count) * t.device(e.device).jit_ns_per_instr.value_or(0.0)});
  }
  return out;
}

}  // namespace flowrt::runtime
