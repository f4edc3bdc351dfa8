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

#include "flowrt/analysis/affinity.hpp"

#include <algorithm>

#include "json.hpp"

namespace flowrt::analysis {

std::string_view to_string(DecisionSource s) {
  return s == DecisionSource::annotation ? "annotation" : "rule";
}

AffinityDecision detect_affinity(const CapabilityProfile& p, std::optional<cft::AffinityHint> hint,
                                 double ratio_threshold) {
  auto by_rule = [](DeviceClass c, std::string_view id) {
    return AffinityDecision{c, DecisionSource::rule, std::string(id)};
  };
  if (hint) return {hint->device_class, DecisionSource::annotation, std::string(rule::annotation)};
  if (p.file_ops > 0 && p.file_ops >= p.net_ops) return by_rule(DeviceClass::storage_processor, rule::file_io);
  if (p.net_ops > 0) return by_rule(DeviceClass::network_processor, rule::net_io);
  if (p.max_loop_depth >= 1 && p.mem_ops > 0 &&
      static_cast<double>(p.arith_ops) / static_cast<double>(p.mem_ops) >= ratio_threshold) {
    return by_rule(DeviceClass::parallel_accelerator, rule::compute_intensity);
  }
  return by_rule(DeviceClass::cpu, rule::default_cpu);
}

std::vector<std::uint32_t> spawnable_functions(const cft::Module& m) {
  std::vector<std::uint32_t> out{m.entry};
  for (std::uint32_t t : m.threads) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

std::vector<FunctionAnalysis> analyze_module(const cft::Module& m, double ratio_threshold) {
  const CallGraph g = build_call_graph(m);
  std::vector<FunctionAnalysis> out;
  for (std::uint32_t f : spawnable_functions(m)) {
    FunctionAnalysis a;
    a.function = f;
    a.profile = profile_function(m, f, g);
    std::optional<cft::AffinityHint> hint;
    if (f < m.function_count() && !m.is_import(f)) hint = m.defined(f).hint;
    a.decision = detect_affinity(a.profile, hint, ratio_threshold);
    out.push_back(std::move(a));
  }
  return out;
}

std::string analysis_to_json(const cft::Module& m, const std::vector<FunctionAnalysis>& results) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& a : results) {
    nlohmann::ordered_json profile;
    profile["file_ops"] = a.profile.file_ops;
    profile["net_ops"] = a.profile.net_ops;
    profile["atomic_ops"] = a.profile.atomic_ops;
    profile["mem_ops"] = a.profile.mem_ops;
    profile["arith_ops"] = a.profile.arith_ops;
    profile["max_loop_depth"] = a.profile.max_loop_depth;
    profile["instr_count"] = a.profile.instr_count;
    nlohmann::ordered_json entry;
    entry["function"] = m.func_name(a.function);
    entry["profile"] = std::move(profile);
    entry["decision"] = {{"device_class", std::string(to_string(a.decision.device_class))},
                         {"source", std::string(to_string(a.decision.source))}};
    entry["rationale"] = a.decision.rationale;
    arr.push_back(std::move(entry));
  }
  return arr.dump(2);
}

}  // namespace flowrt::analysis
