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
#include <set>
#include <string>
#include <vector>

#include "flowrt/cft/module.hpp"

namespace flowrt::analysis {

// Static call graph over the whole function index space. Imports are leaf
// nodes carrying their host-function identity.
struct CallGraph {
  std::vector<std::set<std::uint32_t>> adjacency;
  std::vector<std::optional<cft::HostFn>> host;  // set for import nodes

  std::size_t size() const { return adjacency.size(); }
  const std::set<std::uint32_t>& callees(std::uint32_t f) const { return adjacency.at(f); }
  bool is_host_leaf(std::uint32_t f) const { return host.at(f).has_value(); }
  // "namespace.name" for host leaves, empty otherwise.
  std::string leaf_tag(std::uint32_t f) const;
};

CallGraph build_call_graph(const cft::Module& m);

/// Functions reachable from `f` through calls, `f` included, in ascending
/// index order. Out-of-range call targets are ignored.
std::vector<std::uint32_t> reachable(const CallGraph& g, std::uint32_t f);

}  // namespace flowrt::analysis
