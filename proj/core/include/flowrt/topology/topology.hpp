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
#include <string_view>
#include <vector>

#include "flowrt/device_class.hpp"
#include "flowrt/error.hpp"

namespace flowrt::topology {

// Placement granularity, distinct from the 64 KiB linear-memory page.
inline constexpr std::uint64_t kPlacementPageSize = 4096;

enum class RegionKind : std::uint8_t { dram_local, dram_remote, cxl_local, cxl_remote, device_local };
enum class CxlType : std::uint8_t { none, type2, type3_memory_only };
enum class AccessKind : std::uint8_t { read, write };

std::string_view to_string(RegionKind k);
std::string_view to_string(CxlType t);
std::string_view to_string(AccessKind k);
std::optional<RegionKind> parse_region_kind(std::string_view s);
std::optional<CxlType> parse_cxl_type(std::string_view s);

struct MemoryRegion {
  std::string id;
  RegionKind kind = RegionKind::dram_local;
  double read_latency_ns = 0;
  double write_latency_ns = 0;
  double bandwidth_gbps = 0;  // decimal GB/s, i.e. bytes per ns
  std::uint64_t capacity_bytes = 0;

  friend bool operator==(const MemoryRegion&, const MemoryRegion&) = default;
};

struct Device {
  std::string id;
  DeviceClass device_class = DeviceClass::cpu;
  CxlType cxl_type = CxlType::none;
  std::optional<double> compute_ns_per_instr;  // absent for memory-only devices
  std::optional<double> jit_ns_per_instr;
  std::optional<std::string> local_region;

  // Memory-only expanders hold data but never run threads.
  bool schedulable() const { return cxl_type != CxlType::type3_memory_only; }

  friend bool operator==(const Device&, const Device&) = default;
};

struct AccessOverride {
  std::string device;
  std::string region;
  double read_latency_ns = 0;
  double write_latency_ns = 0;
  double bandwidth_gbps = 0;

  friend bool operator==(const AccessOverride&, const AccessOverride&) = default;
};

// Resolved performance of one (device, region) pair.
struct AccessCost {
  double read_latency_ns = 0;
  double write_latency_ns = 0;
  double bandwidth_gbps = 0;

  double latency(AccessKind k) const { return k == AccessKind::read ? read_latency_ns : write_latency_ns; }
  friend bool operator==(const AccessCost&, const AccessCost&) = default;
};

class TopologyError : public Error {
 public:
  enum class Kind { schema, dangling_reference, unknown_device, unknown_region };

  TopologyError(Kind kind, std::string subject, const std::string& reason);

  Kind kind() const { return kind_; }
  // Offending field path for schema errors, or the unresolved id.
  const std::string& subject() const { return subject_; }

 private:
  Kind kind_;
  std::string subject_;
};

std::string_view to_string(TopologyError::Kind k);

/// Immutable system description. The constructor enforces the structural
/// invariants and resolves the device x region cost matrix; it throws
/// TopologyError on the first violation.
class Topology {
 public:
  Topology(std::vector<Device> devices, std::vector<MemoryRegion> regions,
           std::vector<AccessOverride> overrides = {});

  const std::vector<Device>& devices() const { return devices_; }
  const std::vector<MemoryRegion>& regions() const { return regions_; }
  const std::vector<AccessOverride>& overrides() const { return overrides_; }

  std::optional<std::size_t> device_index(std::string_view id) const;
  std::optional<std::size_t> region_index(std::string_view id) const;
  const Device& device(std::size_t i) const { return devices_.at(i); }
  const MemoryRegion& region(std::size_t i) const { return regions_.at(i); }

  const AccessCost& cost(std::size_t device, std::size_t region) const {
    return matrix_[device * regions_.size() + region];
  }
  // Throws TopologyError(unknown_device / unknown_region).
  const AccessCost& cost(std::string_view device, std::string_view region) const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.devices_ == b.devices_ && a.regions_ == b.regions_ && a.overrides_ == b.overrides_;
  }

 private:
  std::vector<Device> devices_;
  std::vector<MemoryRegion> regions_;
  std::vector<AccessOverride> overrides_;
  std::vector<AccessCost> matrix_;  // row-major, devices x regions
};

/// latency(kind) + bytes / bandwidth, in ns. `bytes` must be positive.
double access_cost(const AccessCost& c, AccessKind kind, std::uint64_t bytes);
double access_cost(const Topology& t, std::string_view device, std::string_view region, AccessKind kind,
                   std::uint64_t bytes);

// JSON document <-> Topology. Parsing throws TopologyError.
Topology topology_from_json(std::string_view json_text);
std::string topology_to_json(const Topology& t);
Topology load_topology(const std::string& path);

}  // namespace flowrt::topology
