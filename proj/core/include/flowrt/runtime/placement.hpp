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
#include <vector>

#include "flowrt/topology/topology.hpp"

namespace flowrt::runtime {

using topology::kPlacementPageSize;

/// Maps every 4096-byte page of linear memory to a region index.
class Placement {
 public:
  Placement() = default;
  explicit Placement(std::vector<std::uint32_t> page_regions) : pages_(std::move(page_regions)) {}

  static Placement uniform(std::size_t pages, std::uint32_t region) {
    return Placement(std::vector<std::uint32_t>(pages, region));
  }

  std::size_t page_count() const { return pages_.size(); }
  std::uint32_t region_of(std::size_t page) const { return pages_[page]; }
  void set(std::size_t page, std::uint32_t region) { pages_.at(page) = region; }
  void append(std::uint32_t region, std::size_t count) { pages_.insert(pages_.end(), count, region); }
  const std::vector<std::uint32_t>& pages() const { return pages_; }

  std::vector<std::uint64_t> bytes_per_region(std::size_t region_count) const;
  // True when no region holds more pages than its capacity allows.
  bool within_capacity(const topology::Topology& t) const;

  friend bool operator==(const Placement&, const Placement&) = default;

 private:
  std::vector<std::uint32_t> pages_;
};

/// Per-epoch access counters keyed by (page, device).
class AccessStats {
 public:
  void resize(std::size_t pages, std::size_t devices);

  void record(std::size_t page, std::size_t device) {
    const std::size_t i = page * devices_ + device;
    if (page_totals_[page]++ == 0) touched_.push_back(page);
    ++counts_[i];
    ++total_;
  }

  std::uint64_t count(std::size_t page, std::size_t device) const { return counts_[page * devices_ + device]; }
  std::uint64_t page_total(std::size_t page) const { return page_totals_[page]; }
  std::uint64_t total() const { return total_; }
  std::size_t device_count() const { return devices_; }
  std::size_t page_count() const { return page_totals_.size(); }

  // Pages with at least one access this epoch, ascending.
  std::vector<std::size_t> touched_pages() const;
  void reset();

 private:
  std::size_t devices_ = 0;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> page_totals_;
  std::vector<std::size_t> touched_;
  std::uint64_t total_ = 0;
};

}  // namespace flowrt::runtime
