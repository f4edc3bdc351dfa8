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

#include "flowrt/analysis/call_graph.hpp"
#include "flowrt/cft/module.hpp"

namespace flowrt::analysis {

struct CapabilityProfile {
  std::uint64_t file_ops = 0;    // call sites of wasi.fd_read / wasi.fd_write
  std::uint64_t net_ops = 0;     // call sites of wasi.sock_send / wasi.sock_recv
  std::uint64_t atomic_ops = 0;
  std::uint64_t mem_ops = 0;     // plain loads and stores
  std::uint64_t arith_ops = 0;   // integer arithmetic, bitwise and compare
  std::uint32_t max_loop_depth = 0;
  std::uint64_t instr_count = 0;

  friend bool operator==(const CapabilityProfile&, const CapabilityProfile&) = default;
};

/// Static counts over the transitive call closure of `f`. Each reachable body
/// is counted once regardless of how many call sites reach it; loop depth is
/// the maximum over the closure, not a sum along call chains.
CapabilityProfile profile_function(const cft::Module& m, std::uint32_t f, const CallGraph& g);

// Counts for a single body, without following calls.
CapabilityProfile profile_body(const cft::Module& m, const cft::FuncDef& body);

}  // namespace flowrt::analysis
