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

#include "flowrt/hostbench/chase.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "flowrt/hostbench/prng.hpp"

namespace flowrt::hostbench {

void check_geometry(std::uint64_t size_bytes, std::uint64_t stride_bytes) {
  if (stride_bytes < 8 || stride_bytes % 8 != 0) {
    throw BadGeometry("stride must be a positive multiple of 8 bytes, got " + std::to_string(stride_bytes));
  }
  if (size_bytes % stride_bytes != 0) {
    throw BadGeometry("size " + std::to_string(size_bytes) + " is not a multiple of stride " +
                      std::to_string(stride_bytes));
  }
  if (size_bytes / stride_bytes < 2) throw BadGeometry("fewer than two participating slots");
}

ChaseBuffer build_chain(std::uint64_t size_bytes, std::uint64_t stride_bytes, std::uint64_t seed) {
  check_geometry(size_bytes, stride_bytes);
  ChaseBuffer buf;
  buf.size_bytes = size_bytes;
  buf.stride_bytes = stride_bytes;
  buf.seed = seed;
  buf.slots.assign(size_bytes / 8, 0);

  const std::uint64_t n = size_bytes / stride_bytes;
  const std::uint64_t step = stride_bytes / 8;
  std::vector<std::uint64_t> next(n);
  std::iota(next.begin(), next.end(), 0);
  SplitMix64 rng(seed);
  for (std::uint64_t i = n - 1; i > 0; --i) {
    std::swap(next[i], next[rng.below(i)]);
  }
  for (std::uint64_t k = 0; k < n; ++k) buf.slots[k * step] = next[k] * step;
  return buf;
}

BenchRow measure_chase(const ChaseBuffer& buf, std::uint64_t loads, std::uint64_t repeats) {
  const std::uint64_t n = buf.participating();
  if (loads < n) throw std::invalid_argument("loads must cover at least one full traversal");
  if (repeats == 0) throw std::invalid_argument("repeats must be at least 1");

  const std::uint64_t* slots = buf.slots.data();
  std::uint64_t idx = buf.start;
  for (std::uint64_t i = 0; i < n; ++i) idx = slots[idx];

  std::vector<double> samples;
  samples.reserve(repeats);
  for (std::uint64_t r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t i = 0; i < loads; ++i) idx = slots[idx];
    const auto t1 = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count() / static_cast<double>(loads));
  }

  BenchRow row;
  row.size_bytes = buf.size_bytes;
  row.stride_bytes = buf.stride_bytes;
  row.loads = loads;
  row.repeats = repeats;
  row.seed = buf.seed;
  row.sink = idx;
  row.ns_per_load = std::numeric_limits<double>::max();
  double sum = 0;
  for (double s : samples) {
    row.ns_per_load = std::min(row.ns_per_load, s);
    sum += s;
  }
  row.mean_ns = sum / static_cast<double>(repeats);
  double var = 0;
  for (double s : samples) var += (s - row.mean_ns) * (s - row.mean_ns);
  row.stddev_ns = std::sqrt(var / static_cast<double>(repeats));
  // A sub-resolution timer can report 0 on tiny inputs; keep rows positive.
  if (row.ns_per_load <= 0) row.ns_per_load = std::numeric_limits<double>::min();
  return row;
}

}  // namespace flowrt::hostbench
