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

#include "flowrt/analysis/profile.hpp"

#include <algorithm>

namespace flowrt::analysis {

CapabilityProfile profile_body(const cft::Module& m, const cft::FuncDef& body) {
  using cft::OpClass;
  using cft::Opcode;
  CapabilityProfile p;
  std::vector<bool> open_loops;  // one entry per open block; true for loops
  std::uint32_t depth = 0;
  for (const auto& ins : body.body) {
    ++p.instr_count;
    switch (cft::info(ins.op).cls) {
      case OpClass::arith: ++p.arith_ops; break;
      case OpClass::load:
      case OpClass::store: ++p.mem_ops; break;
      case OpClass::atomic: ++p.atomic_ops; break;
      default: break;
    }
    if (ins.op == Opcode::block || ins.op == Opcode::if_ || ins.op == Opcode::loop) {
      const bool is_loop = ins.op == Opcode::loop;
      open_loops.push_back(is_loop);
      if (is_loop) p.max_loop_depth = std::max(p.max_loop_depth, ++depth);
    } else if (ins.op == Opcode::end && !open_loops.empty()) {
      if (open_loops.back()) --depth;
      open_loops.pop_back();
    } else if (ins.op == Opcode::call && m.is_import(ins.index)) {
      switch (m.imports[ins.index].host) {
        case cft::HostFn::fd_read:
        case cft::HostFn::fd_write: ++p.file_ops; break;
        case cft::HostFn::sock_send:
        case cft::HostFn::sock_recv: ++p.net_ops; break;
        default: break;
      }
    }
  }
  return p;
}

CapabilityProfile profile_function(const cft::Module& m, std::uint32_t f, const CallGraph& g) {
  CapabilityProfile total;
  for (std::uint32_t n : reachable(g, f)) {
    if (m.is_import(n)) continue;
    const CapabilityProfile p = profile_body(m, m.defined(n));
    total.file_ops += p.file_ops;
    total.net_ops += p.net_ops;
    total.atomic_ops += p.atomic_ops;
    total.mem_ops += p.mem_ops;
    total.arith_ops += p.arith_ops;
    total.instr_count += p.instr_count;
    total.max_loop_depth = std::max(total.max_loop_depth, p.max_loop_depth);
  }
  return total;
}

}  // namespace flowrt::analysis
