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

#include "flowrt/topology/lint.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace flowrt::topology {

bool LintReport::has_errors() const {
  return std::any_of(findings.begin(), findings.end(),
                     [](const LintFinding& f) { return f.severity == Severity::error; });
}

bool LintReport::has(std::string_view rule) const {
  return std::any_of(findings.begin(), findings.end(), [&](const LintFinding& f) { return f.rule == rule; });
}

std::string LintReport::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& f : findings) {
    arr.push_back({{"rule", f.rule}, {"severity", std::string(to_string(f.severity))}, {"message", f.message}});
  }
  nlohmann::ordered_json doc;
  doc["ok"] = !has_errors();
  doc["findings"] = std::move(arr);
  return doc.dump(2);
}

namespace {

struct Range {
  bool present = false;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double v) {
    present = true;
    min = std::min(min, v);
    max = std::max(max, v);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

LintReport validate_topology(const Topology& t, bool tiered_ordering) {
  LintReport report;
  const bool has_cpu = std::any_of(t.devices().begin(), t.devices().end(), [](const Device& d) {
    return d.schedulable() && d.device_class == DeviceClass::cpu;
  });
  if (!has_cpu) {
    report.findings.push_back({"NO_CPU_DEVICE", Severity::error, "no schedulable cpu-class device"});
  }
  if (t.regions().empty()) {
    report.findings.push_back({"NO_REGIONS", Severity::error, "topology declares no memory regions"});
  }
  for (const auto& d : t.devices()) {
    if (!d.schedulable() && d.compute_ns_per_instr) {
      report.findings.push_back({"UNUSED_COMPUTE_RATE", Severity::warning,
                                 "memory-only device '" + d.id + "' never executes instructions"});
    }
  }
  if (!tiered_ordering) return report;

  Range dram_local_lat, cxl_local_lat, cxl_remote_lat, cxl_bw, dram_remote_bw;
  for (const auto& r : t.regions()) {
    switch (r.kind) {
      case RegionKind::dram_local: dram_local_lat.add(r.read_latency_ns); break;
      case RegionKind::cxl_local:
        cxl_local_lat.add(r.read_latency_ns);
        cxl_bw.add(r.bandwidth_gbps);
        break;
      case RegionKind::cxl_remote:
        cxl_remote_lat.add(r.read_latency_ns);
        cxl_bw.add(r.bandwidth_gbps);
        break;
      case RegionKind::dram_remote: dram_remote_bw.add(r.bandwidth_gbps); break;
      case RegionKind::device_local: break;
    }
  }

  auto latency = [&](const std::string& msg) {
    report.findings.push_back({"TIER_ORDER_LATENCY", Severity::warning, msg});
  };
  if (dram_local_lat.present && cxl_local_lat.present && !(dram_local_lat.max < cxl_local_lat.min)) {
    latency("cxl_local read latency (min " + fmt(cxl_local_lat.min) +
            " ns) should exceed dram_local (max " + fmt(dram_local_lat.max) + " ns)");
  }
  if (cxl_local_lat.present && cxl_remote_lat.present && !(cxl_local_lat.min < cxl_remote_lat.min)) {
    latency("cxl_remote read latency (min " + fmt(cxl_remote_lat.min) +
            " ns) should exceed cxl_local (min " + fmt(cxl_local_lat.min) + " ns)");
  }
  if (!cxl_local_lat.present && dram_local_lat.present && cxl_remote_lat.present &&
      !(dram_local_lat.max < cxl_remote_lat.min)) {
    latency("cxl_remote read latency (min " + fmt(cxl_remote_lat.min) +
            " ns) should exceed dram_local (max " + fmt(dram_local_lat.max) + " ns)");
  }
  if (cxl_bw.present && dram_remote_bw.present && !(cxl_bw.max < dram_remote_bw.min)) {
    report.findings.push_back({"TIER_ORDER_BANDWIDTH", Severity::warning,
                               "cxl bandwidth (max " + fmt(cxl_bw.max) +
                                   " GB/s) should stay below dram_remote (min " + fmt(dram_remote_bw.min) +
                                   " GB/s)"});
  }
  return report;
}

}  // namespace flowrt::topology
