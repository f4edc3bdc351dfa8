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

#include <string>
#include <vector>

#include "flowrt/severity.hpp"
#include "flowrt/topology/topology.hpp"

namespace flowrt::topology {

struct LintFinding {
  std::string rule;
  Severity severity = Severity::warning;
  std::string message;
};

struct LintReport {
  std::vector<LintFinding> findings;

  bool empty() const { return findings.empty(); }
  bool has_errors() const;
  bool has(std::string_view rule) const;
  std::string to_json() const;
};

/// Structural findings are errors. With `tiered_ordering` on, also warns when
/// the regions break the expected tier ordering:
///   max(dram_local) < min(cxl_local) < min(cxl_remote)   read latency
///   max(cxl_*) < min(dram_remote)                       bandwidth
/// Each comparison is checked only when both sides exist.
LintReport validate_topology(const Topology& t, bool tiered_ordering);

}  // namespace flowrt::topology
