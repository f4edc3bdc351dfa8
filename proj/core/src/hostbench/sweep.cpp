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

#include "flowrt/hostbench/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace flowrt::hostbench {

std::vector<std::uint64_t> size_ladder(std::uint64_t min_bytes, std::uint64_t max_bytes, double factor,
                                       std::uint64_t stride_bytes) {
  if (min_bytes > max_bytes) throw std::invalid_argument("sweep min exceeds max");
  if (!(factor > 1.0)) throw std::invalid_argument("sweep factor must exceed 1");
  if (stride_bytes == 0) throw BadGeometry("stride must be positive");
  std::vector<std::uint64_t> out;
  for (double s = static_cast<double>(min_bytes); s <= static_cast<double>(max_bytes) * (1 + 1e-12); s *= factor) {
    const auto rounded = static_cast<std::uint64_t>(s) / stride_bytes * stride_bytes;
    if (out.empty() || out.back() != rounded) out.push_back(rounded);
  }
  return out;
}

std::vector<BenchRow> sweep(const SweepConfig& cfg) {
  const auto sizes = size_ladder(cfg.min_bytes, cfg.max_bytes, cfg.factor, cfg.stride_bytes);
  for (std::uint64_t s : sizes) check_geometry(s, cfg.stride_bytes);
  std::vector<BenchRow> rows;
  for (std::uint64_t s : sizes) {
    const ChaseBuffer buf = build_chain(s, cfg.stride_bytes, cfg.seed);
    rows.push_back(measure_chase(buf, std::max(cfg.loads, buf.participating()), cfg.repeats));
  }
  return rows;
}

std::string rows_to_csv(const std::vector<BenchRow>& rows) {
  std::string out = "size_bytes,stride_bytes,loads,repeats,ns_per_load,stddev_ns\n";
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%llu,%llu,%llu,%llu,%.4f,%.4f\n",
                  static_cast<unsigned long long>(r.size_bytes), static_cast<unsigned long long>(r.stride_bytes),
                  static_cast<unsigned long long>(r.loads), static_cast<unsigned long long>(r.repeats),
                  r.ns_per_load, r.stddev_ns);
    out += line;
  }
  return out;
}

std::string rows_to_json(const std::vector<BenchRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["size_bytes"] = r.size_bytes;
    o["stride_bytes"] = r.stride_bytes;
    o["loads"] = r.loads;
    o["repeats"] = r.repeats;
    o["ns_per_load"] = r.ns_per_load;
    o["stddev_ns"] = r.stddev_ns;
    o["mean_ns"] = r.mean_ns;
    o["seed"] = r.seed;
    o["sink"] = r.sink;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

}  // namespace flowrt::hostbench
