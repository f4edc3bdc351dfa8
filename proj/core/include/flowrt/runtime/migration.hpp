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
#include <string>
#include <vector>

#include "flowrt/runtime/placement.hpp"
#include "flowrt/topology/topology.hpp"

namespace flowrt::runtime {

struct MigrationPolicy {
  std::uint64_t epoch_instructions = 10000;
  std::uint64_t hot_threshold = 64;
  double fixed_overhead_ns = 1000;

  bool valid() const { return epoch_instructions > 0 && hot_threshold > 0 && fixed_overhead_ns > 0; }
  friend bool operator==(const MigrationPolicy&, const MigrationPolicy&) = default;
};

struct MigrationRecord {
  std::uint64_t epoch = 0;
  std::uint64_t page = 0;
  std::uint32_t from_region = 0;
  std::uint32_t to_region = 0;
  std::uint32_t device = 0;  // hottest accessor
  double cost_ns = 0;

  friend bool operator==(const MigrationRecord&, const MigrationRecord&) = default;
};

/// Moves every hot page to the region with the lowest read latency for its
/// hottest device, if that is a strict improvement and the region has room.
/// Pages are visited in ascending order; capacity is consumed as they move.
std::vector<MigrationRecord> epoch_migrate(const AccessStats& stats, Placement& placement,
                                           const topology::Topology& t, const MigrationPolicy& policy,
                                           std::uint64_t epoch);

}  // namespace flowrt::runtime
