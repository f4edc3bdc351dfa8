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

#include "flowrt/error.hpp"

namespace flowrt::hostbench {

class BadGeometry : public Error {
 public:
  using Error::Error;
};

/// Pointer-chasing buffer of 8-byte slots. Participating slots sit at every
/// `stride_bytes`; each holds the slot index of its successor, and together
/// they form one cycle through all n of them. Other slots stay zero.
struct ChaseBuffer {
  std::vector<std::uint64_t> slots;
  std::uint64_t size_bytes = 0;
  std::uint64_t stride_bytes = 0;
  std::uint64_t seed = 0;
  std::uint64_t start = 0;  // slot index

  std::uint64_t participating() const { return size_bytes / stride_bytes; }
};

// Throws BadGeometry unless stride >= 8, stride % 8 == 0, size % stride == 0
// and at least two slots participate.
void check_geometry(std::uint64_t size_bytes, std::uint64_t stride_bytes);

/// Sattolo shuffle of the participating slots driven by splitmix64(seed).
ChaseBuffer build_chain(std::uint64_t size_bytes, std::uint64_t stride_bytes, std::uint64_t seed);

struct BenchRow {
  std::uint64_t size_bytes = 0;
  std::uint64_t stride_bytes = 0;
  std::uint64_t loads = 0;
  std::uint64_t repeats = 0;
  double ns_per_load = 0;  // min over repeats
  double mean_ns = 0;
  double stddev_ns = 0;
  std::uint64_t seed = 0;
  std::uint64_t sink = 0;  // final chain index, keeps the loop observable
};

/// One untimed warmup traversal, then `repeats` timed passes of `loads`
/// dependent loads each. Throws std::invalid_argument if loads < n or
/// repeats == 0.
BenchRow measure_chase(const ChaseBuffer& buf, std::uint64_t loads, std::uint64_t repeats);

}  // namespace flowrt::hostbench
