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

#include "flowrt/hostbench/chase.hpp"

namespace flowrt::hostbench {

struct SweepConfig {
  std::uint64_t min_bytes = 4096;
  std::uint64_t max_bytes = std::uint64_t{256} << 20;
  double factor = 2.0;
  std::uint64_t stride_bytes = 64;
  std::uint64_t seed = 0;
  std::uint64_t loads = 1 << 20;  // raised to n where a size needs more
  std::uint64_t repeats = 5;
};

/// Geometric ladder min, min*factor, ... <= max, each rounded down to a
/// multiple of stride, duplicates dropped.
std::vector<std::uint64_t> size_ladder(std::uint64_t min_bytes, std::uint64_t max_bytes, double factor,
                                       std::uint64_t stride_bytes);

std::vector<BenchRow> sweep(const SweepConfig& cfg);

// size_bytes,stride_bytes,loads,repeats,ns_per_load,stddev_ns
std::string rows_to_csv(const std::vector<BenchRow>& rows);
std::string rows_to_json(const std::vector<BenchRow>& rows);

}  // namespace flowrt::hostbench
