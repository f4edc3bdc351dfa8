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

#include <fstream>
#include <sstream>

#include "flowrt/topology/topology.hpp"
#include "json.hpp"

namespace flowrt::topology {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void schema(const std::string& field, const std::string& reason) {
  throw TopologyError(TopologyError::Kind::schema, field, reason);
}

void check_keys(const json& obj, const std::string& at, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok |= (a == k);
    if (!ok) schema(at + "." + k, "unknown field");
  }
}

const json& field(const json& obj, const std::string& at, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) schema(at + "." + name, "missing");
  return *it;
}

std::string get_string(const json& obj, const std::string& at, const char* name) {
  const json& v = field(obj, at, name);
  if (!v.is_string()) schema(at + "." + name, "must be a string");
  return v.get<std::string>();
}

double get_number(const json& obj, const std::string& at, const char* name) {
  const json& v = field(obj, at, name);
  if (!v.is_number()) schema(at + "." + name, "must be a number");
  return v.get<double>();
}

std::optional<double> get_opt_number(const json& obj, const std::string& at, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) schema(at + "." + name, "must be a number or null");
  return it->get<double>();
}

const json& get_array(const json& obj, const char* name, bool required) {
  static const json empty = json::array();
  auto it = obj.find(name);
  if (it == obj.end()) {
    if (required) schema(name, "missing");
    return empty;
  }
  if (!it->is_array()) schema(name, "must be an array");
  return *it;
}

MemoryRegion parse_region(const json& j, const std::string& at) {
  if (!j.is_object()) schema(at, "must be an object");
  check_keys(j, at, {"id", "kind", "read_latency_ns", "write_latency_ns", "bandwidth_gbps", "capacity_bytes"});
  MemoryRegion r;
  r.id = get_string(j, at, "id");
  const std::string kind = get_string(j, at, "kind");
  auto k = parse_region_kind(kind);
  if (!k) schema(at + ".kind", "unknown region kind '" + kind + "'");
  r.kind = *k;
  r.read_latency_ns = get_number(j, at, "read_latency_ns");
  r.write_latency_ns = get_number(j, at, "write_latency_ns");
  r.bandwidth_gbps = get_number(j, at, "bandwidth_gbps");
  const json& cap = field(j, at, "capacity_bytes");
  if (!cap.is_number_unsigned()) schema(at + ".capacity_bytes", "must be a non-negative integer");
  r.capacity_bytes = cap.get<std::uint64_t>();
  return r;
}

Device parse_device(const json& j, const std::string& at) {
  if (!j.is_object()) schema(at, "must be an object");
  check_keys(j, at, {"id", "class", "cxl_type", "compute_ns_per_instr", "jit_ns_per_instr", "local_region"});
  Device d;
  d.id = get_string(j, at, "id");
  const std::string cls = get_string(j, at, "class");
  auto c = parse_device_class(cls);
  if (!c) schema(at + ".class", "unknown device class '" + cls + "'");
  d.device_class = *c;
  const std::string cxl = get_string(j, at, "cxl_type");
  auto t = parse_cxl_type(cxl);
  if (!t) schema(at + ".cxl_type", "unknown cxl_type '" + cxl + "'");
  d.cxl_type = *t;
  d.compute_ns_per_instr = get_opt_number(j, at, "compute_ns_per_instr");
  d.jit_ns_per_instr = get_opt_number(j, at, "jit_ns_per_instr");
  if (auto it = j.find("local_region"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) schema(at + ".local_region", "must be a string or null");
    d.local_region = it->get<std::string>();
  }
  return d;
}

AccessOverride parse_override(const json& j, const std::string& at) {
  if (!j.is_object()) schema(at, "must be an object");
  check_keys(j, at, {"device", "region", "read_latency_ns", "write_latency_ns", "bandwidth_gbps"});
  AccessOverride o;
  o.device = get_string(j, at, "device");
  o.region = get_string(j, at, "region");
  o.read_latency_ns = get_number(j, at, "read_latency_ns");
  o.write_latency_ns = get_number(j, at, "write_latency_ns");
  o.bandwidth_gbps = get_number(j, at, "bandwidth_gbps");
  return o;
}

}  // namespace

Topology topology_from_json(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    schema("$", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema("$", "top level must be an object");
  check_keys(doc, "$", {"devices", "regions", "access_overrides"});
  std::vector<Device> devices;
  std::vector<MemoryRegion> regions;
  std::vector<AccessOverride> overrides;
  const json& jd = get_array(doc, "devices", true);
  for (std::size_t i = 0; i < jd.size(); ++i) devices.push_back(parse_device(jd[i], "devices[" + std::to_string(i) + "]"));
  const json& jr = get_array(doc, "regions", true);
  for (std::size_t i = 0; i < jr.size(); ++i) regions.push_back(parse_region(jr[i], "regions[" + std::to_string(i) + "]"));
  const json& jo = get_array(doc, "access_overrides", false);
  for (std::size_t i = 0; i < jo.size(); ++i) {
    overrides.push_back(parse_override(jo[i], "access_overrides[" + std::to_string(i) + "]"));
  }
  return Topology(std::move(devices), std::move(regions), std::move(overrides));
}

std::string topology_to_json(const Topology& t) {
  ordered_json doc;
  doc["devices"] = ordered_json::array();
  for (const auto& d : t.devices()) {
    ordered_json j;
    j["id"] = d.id;
    j["class"] = std::string(to_string(d.device_class));
    j["cxl_type"] = std::string(to_string(d.cxl_type));
    if (d.compute_ns_per_instr) j["compute_ns_per_instr"] = *d.compute_ns_per_instr;
    if (d.jit_ns_per_instr) j["jit_ns_per_instr"] = *d.jit_ns_per_instr;
    if (d.local_region) j["local_region"] = *d.local_region;
    doc["devices"].push_back(std::move(j));
  }
  doc["regions"] = ordered_json::array();
  for (const auto& r : t.regions()) {
    doc["regions"].push_back({{"id", r.id},
                              {"kind", std::string(to_string(r.kind))},
                              {"read_latency_ns", r.read_latency_ns},
                              {"write_latency_ns", r.write_latency_ns},
                              {"bandwidth_gbps", r.bandwidth_gbps},
                              {"capacity_bytes", r.capacity_bytes}});
  }
  doc["access_overrides"] = ordered_json::array();
  for (const auto& o : t.overrides()) {
    doc["access_overrides"].push_back({{"device", o.device},
                                       {"region", o.region},
                                       {"read_latency_ns", o.read_latency_ns},
                                       {"write_latency_ns", o.write_latency_ns},
                                       {"bandwidth_gbps", o.bandwidth_gbps}});
  }
  return doc.dump(2);
}

Topology load_topology(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) schema(path, "cannot open topology file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return topology_from_json(ss.str());
}

}  // namespace flowrt::topology
