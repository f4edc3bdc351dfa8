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
#include <vector>

#include "flowrt/cft/module.hpp"
#include "flowrt/severity.hpp"

namespace flowrt::cft {

using flowrt::Severity;

struct Finding {
  std::string rule;  // e.g. "UNRESOLVED_CALL"
  Severity severity = Severity::error;
  std::optional<std::uint32_t> function;
  std::optional<std::uint32_t> instruction;  // index into the function body
  SourceLoc loc;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool empty() const { return findings.empty(); }
  bool has_errors() const;
  std::size_t count(std::string_view rule) const;
};

/// Checks index ranges, branch depths, stack typing and the module-level
/// invariants (shared memory, main and thread signatures).
ValidationReport validate_module(const Module& m);

}  // namespace flowrt::cft
