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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flowrt/analysis/profile.hpp"
#include "flowrt/cft/module.hpp"
#include "flowrt/device_class.hpp"

namespace flowrt::analysis {

inline constexpr double kDefaultRatioThreshold = 2.0;

enum class DecisionSource : std::uint8_t { annotation, rule };

std::string_view to_string(DecisionSource s);

// Rule ids reported as the decision rationale.
namespace rule {
inline constexpr std::string_view annotation = "ANNOTATION";
inline constexpr std::string_view file_io = "FILE_IO";
inline constexpr std::string_view net_io = "NET_IO";
inline constexpr std::string_view compute_intensity = "COMPUTE_INTENSITY";
inline constexpr std::string_view default_cpu = "DEFAULT_CPU";
}  // namespace rule

struct AffinityDecision {
  DeviceClass device_class = DeviceClass::cpu;
  DecisionSource source = DecisionSource::rule;
  std::string rationale;

  friend bool operator==(const AffinityDecision&, const AffinityDecision&) = default;
};

/// First matching rule wins:
///   1. an annotation decides outright;
///   2. file_ops > 0 and file_ops >= net_ops  -> storage_processor;
///   3. net_ops > 0                           -> network_processor;
///   4. a loop with memory traffic whose arith/mem ratio reaches
///      `ratio_threshold`, and no I/O          -> parallel_accelerator;
///   5. otherwise                             -> cpu.
AffinityDecision detect_affinity(const CapabilityProfile& p, std::optional<cft::AffinityHint> hint,
                                 double ratio_threshold = kDefaultRatioThreshold);

struct FunctionAnalysis {
  std::uint32_t function = 0;
  CapabilityProfile profile;
  AffinityDecision decision;
};

// main first, then thread-table entries in declaration order, without repeats.
std::vector<std::uint32_t> spawnable_functions(const cft::Module& m);

std::vector<FunctionAnalysis> analyze_module(const cft::Module& m,
                                             double ratio_threshold = kDefaultRatioThreshold);

// JSON array of {function, profile, decision, rationale}.
std::string analysis_to_json(const cft::Module& m, const std::vector<FunctionAnalysis>& results);

}  // namespace flowrt::analysis
