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

#include "flowrt/topology/topology.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace flowrt::topology {

std::string_view to_string(RegionKind k) {
  switch (k) {
    case RegionKind::dram_local: return "dram_local";
    case RegionKind::dram_remote: return "dram_remote";
    case RegionKind::cxl_local: return "cxl_local";
    case RegionKind::cxl_remote: return "cxl_remote";
    case RegionKind::device_local: return "device_local";
  }
  return "?";
}

std::string_view to_string(CxlType t) {
  switch (t) {
    case CxlType::none: return "none";
    case CxlType::type2: return "type2";
    case CxlType::type3_memory_only: return "type3_memory_only";
  }
  return "?";
}

std::string_view to_string(AccessKind k) { return k == AccessKind::read ? "read" : "write"; }

std::optional<RegionKind> parse_region_kind(std::string_view s) {
  for (auto k : {RegionKind::dram_local, RegionKind::dram_remote, RegionKind::cxl_local,
                 RegionKind::cxl_remote, RegionKind::device_local}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::optional<CxlType> parse_cxl_type(std::string_view s) {
  for (auto t : {CxlType::none, CxlType::type2, CxlType::type3_memory_only}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::string_view to_string(TopologyError::Kind k) {
  switch (k) {
    case TopologyError::Kind::schema: return "SchemaError";
    case TopologyError::Kind::dangling_reference: return "DanglingReference";
    case TopologyError::Kind::unknown_device: return "UnknownDevice";
    case TopologyError::Kind::unknown_region: return "UnknownRegion";
  }
  return "TopologyError";
}

TopologyError::TopologyError(Kind kind, std::string subject, const std::string& reason)
    : Error(std::string(to_string(kind)) + "(" + subject + "): " + reason),
      kind_(kind),
      subject_(std::move(subject)) {}

namespace {

[[noreturn]] void schema(const std::string& field, const std::string& reason) {
  throw TopologyError(TopologyError::Kind::schema, field, reason);
}

[[noreturn]] void dangling(const std::string& id, const std::string& reason) {
  throw TopologyError(TopologyError::Kind::dangling_reference, id, reason);
}

void require_positive(double v, const std::string& field) {
  if (!std::isfinite(v) || v <= 0) schema(field, "must be a positive finite number");
}

}  // namespace

Topology::Topology(std::vector<Device> devices, std::vector<MemoryRegion> regions,
                   std::vector<AccessOverride> overrides)
    : devices_(std::move(devices)), regions_(std::move(regions)), overrides_(std::move(overrides)) {
  std::set<std::string> ids;
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    const auto& r = regions_[i];
    const std::string at = "regions[" + std::to_string(i) + "]";
    if (r.id.empty()) schema(at + ".id", "must be non-empty");
    if (!ids.insert(r.id).second) schema(at + ".id", "duplicate id '" + r.id + "'");
    require_positive(r.read_latency_ns, at + ".read_latency_ns");
    require_positive(r.write_latency_ns, at + ".write_latency_ns");
    require_positive(r.bandwidth_gbps, at + ".bandwidth_gbps");
    if (r.capacity_bytes == 0 || r.capacity_bytes % kPlacementPageSize != 0) {
      schema(at + ".capacity_bytes", "must be a positive multiple of 4096");
    }
  }
  for (std::size_t i = 0; i < devices_.size(); ++i) {
    const auto& d = devices_[i];
    const std::string at = "devices[" + std::to_string(i) + "]";
    if (d.id.empty()) schema(at + ".id", "must be non-empty");
    if (!ids.insert(d.id).second) schema(at + ".id", "duplicate id '" + d.id + "'");
    if (d.schedulable()) {
      if (!d.compute_ns_per_instr) schema(at + ".compute_ns_per_instr", "required for schedulable devices");
      if (!d.jit_ns_per_instr) schema(at + ".jit_ns_per_instr", "required for schedulable devices");
    }
    if (d.compute_ns_per_instr) require_positive(*d.compute_ns_per_instr, at + ".compute_ns_per_instr");
    if (d.jit_ns_per_instr && (!std::isfinite(*d.jit_ns_per_instr) || *d.jit_ns_per_instr < 0)) {
      schema(at + ".jit_ns_per_instr", "must be a non-negative finite number");
    }
    if (d.cxl_type == CxlType::type2 && !d.local_region) {
      dangling(d.id, "type2 device must name its local_region");
    }
    if (d.local_region && !region_index(*d.local_region)) {
      dangling(*d.local_region, "local_region of device '" + d.id + "' is not a region");
    }
  }

  matrix_.resize(devices_.size() * regions_.size());
  for (std::size_t d = 0; d < devices_.size(); ++d) {
    for (std::size_t r = 0; r < regions_.size(); ++r) {
      const auto& reg = regions_[r];
      matrix_[d * regions_.size() + r] = {reg.read_latency_ns, reg.write_latency_ns, reg.bandwidth_gbps};
    }
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < overrides_.size(); ++i) {
    const auto& o = overrides_[i];
    const std::string at = "access_overrides[" + std::to_string(i) + "]";
    auto d = device_index(o.device);
    if (!d) dangling(o.device, at + ".device does not name a device");
    auto r = region_index(o.region);
    if (!r) dangling(o.region, at + ".region does not name a region");
    if (!seen.emplace(o.device, o.region).second) schema(at, "duplicate override for this pair");
    require_positive(o.read_latency_ns, at + ".read_latency_ns");
    require_positive(o.write_latency_ns, at + ".write_latency_ns");
    require_positive(o.bandwidth_gbps, at + ".bandwidth_gbps");
    matrix_[*d * regions_.size() + *r] = {o.read_latency_ns, o.write_latency_ns, o.bandwidth_gbps};
  }
}

std::optional<std::size_t> Topology::device_index(std::string_view id) const {
  for (std::size_t i = 0; i < devices_.size(); ++i) {
    if (devices_[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Topology::region_index(std::string_view id) const {
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].id == id) return i;
  }
  return std::nullopt;
}

const AccessCost& Topology::cost(std::string_view device, std::string_view region) const {
  auto d = device_index(device);
  if (!d) throw TopologyError(TopologyError::Kind::unknown_device, std::string(device), "no such device");
  auto r = region_index(region);
  if (!r) throw TopologyError(TopologyError::Kind::unknown_region, std::string(region), "no such region");
  return cost(*d, *r);
}

double access_cost(const AccessCost& c, AccessKind kind, std::uint64_t bytes) {
  if (bytes == 0) throw std::invalid_argument("access_cost: zero-byte access");
  // GB/s is bytes per ns, so bytes / bandwidth is already in ns.
  return c.latency(kind) + static_cast<double>(bytes) / c.bandwidth_gbps;
}

double access_cost(const Topology& t, std::string_view device, std::string_view region, AccessKind kind,
                   std::uint64_t bytes) {
  return access_cost(t.cost(device, region), kind, bytes);
}

}  // namespace flowrt::topology
