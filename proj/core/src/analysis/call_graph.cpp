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

#include "flowrt/analysis/call_graph.hpp"

#include <algorithm>

#include "flowrt/cft/host_registry.hpp"

namespace flowrt::analysis {

std::string CallGraph::leaf_tag(std::uint32_t f) const {
  if (!is_host_leaf(f)) return {};
  const auto& h = cft::host_function(*host.at(f));
  return std::string(h.module_name) + "." + std::string(h.name);
}

CallGraph build_call_graph(const cft::Module& m) {
  CallGraph g;
  g.adjacency.resize(m.function_count());
  g.host.resize(m.function_count());
  for (std::size_t i = 0; i < m.imports.size(); ++i) g.host[i] = m.imports[i].host;
  for (std::size_t i = 0; i < m.functions.size(); ++i) {
    auto& out = g.adjacency[m.imports.size() + i];
    for (const auto& ins : m.functions[i].body) {
      if (ins.op == cft::Opcode::call) out.insert(ins.index);
    }
  }
  return g;
}

std::vector<std::uint32_t> reachable(const CallGraph& g, std::uint32_t f) {
  std::vector<bool> seen(g.size(), false);
  std::vector<std::uint32_t> work;
  if (f < g.size()) {
    seen[f] = true;
    work.push_back(f);
  }
  std::vector<std::uint32_t> out;
  while (!work.empty()) {
    const std::uint32_t n = work.back();
    work.pop_back();
    out.push_back(n);
    for (std::uint32_t c : g.adjacency[n]) {
      if (c < g.size() && !seen[c]) {
        seen[c] = true;
        work.push_back(c);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace flowrt::analysis
