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

#include "flowrt/runtime/migration.hpp"

namespace flowrt::runtime {

std::vector<MigrationRecord> epoch_migrate(const AccessStats& stats, Placement& placement,
                                           const topology::Topology& t, const MigrationPolicy& policy,
                                           std::uint64_t epoch) {
  std::vector<MigrationRecord> out;
  auto used = placement.bytes_per_region(t.regions().size());
  for (const std::size_t page : stats.touched_pages()) {
    if (page >= placement.page_count() || stats.page_total(page) < policy.hot_threshold) continue;

    std::uint32_t hot = 0;
    std::uint64_t hot_count = 0;
    for (std::uint32_t d = 0; d < stats.device_count(); ++d) {
      const std::uint64_t c = stats.count(page, d);
      if (c > hot_count || (c == hot_count && c > 0 && t.device(d).id < t.device(hot).id)) {
        hot = d;
        hot_count = c;
      }
    }

    const std::uint32_t current = placement.region_of(page);
    std::uint32_t best = current;
    for (std::uint32_t r = 0; r < t.regions().size(); ++r) {
      if (r != current && used[r] + kPlacementPageSize > t.region(r).capacity_bytes) continue;
      const double lr = t.cost(hot, r).read_latency_ns;
      const double lb = t.cost(hot, best).read_latency_ns;
      if (lr < lb || (lr == lb && t.region(r).id < t.region(best).id)) best = r;
    }
    if (best == current || !(t.cost(hot, best).read_latency_ns < t.cost(hot, current).read_latency_ns)) continue;

    placement.set(page, best);
    used[current] -= kPlacementPageSize;
    used[best] += kPlacementPageSize;
    const double cost = static_cast<double>(kPlacementPageSize) / t.cost(hot, best).bandwidth_gbps +
                        policy.fixed_overhead_ns;
    out.push_back({epoch, page, current, best, hot, cost});
  }
  return out;
}

}  // namespace flowrt::runtime
