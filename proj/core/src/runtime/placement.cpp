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

#include "flowrt/runtime/placement.hpp"

#include <algorithm>

namespace flowrt::runtime {

std::vector<std::uint64_t> Placement::bytes_per_region(std::size_t region_count) const {
  std::vector<std::uint64_t> out(region_count, 0);
  for (std::uint32_t r : pages_) {
    if (r < region_count) out[r] += kPlacementPageSize;
  }
  return out;
}

bool Placement::within_capacity(const topology::Topology& t) const {
  const auto used = bytes_per_region(t.regions().size());
  for (std::size_t r = 0; r < used.size(); ++r) {
    if (used[r] > t.region(r).capacity_bytes) return false;
  }
  return std::all_of(pages_.begin(), pages_.end(), [&](std::uint32_t r) { return r < t.regions().size(); });
}

void AccessStats::resize(std::size_t pages, std::size_t devices) {
  if (devices != devices_) {
    devices_ = devices;
    counts_.assign(pages * devices, 0);
    page_totals_.assign(pages, 0);
    touched_.clear();
    total_ = 0;
    return;
  }
  counts_.resize(pages * devices, 0);
  page_totals_.resize(pages, 0);
}

std::vector<std::size_t> AccessStats::touched_pages() const {
  std::vector<std::size_t> out = touched_;
  std::sort(out.begin(), out.end());
  return out;
}

void AccessStats::reset() {
  for (std::size_t page : touched_) {
    page_totals_[page] = 0;
    std::fill_n(counts_.begin() + static_cast<std::ptrdiff_t>(page * devices_), devices_, 0);
  }
  touched_.clear();
  total_ = 0;
}

}  // namespace flowrt::runtime
