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
#include <span>

namespace flowrt::hostbench {

inline constexpr std::uint64_t kMinBandwidthBytes = std::uint64_t{1} << 20;

struct StreamResult {
  double gb_per_s = 0;     // best over repeats
  std::uint64_t checksum = 0;  // XOR of all 8-byte words
};

/// Sequential 8-byte reads over `words`, `passes` times per timed repeat.
StreamResult measure_stream(std::span<const std::uint64_t> words, std::uint64_t passes, std::uint64_t repeats);

struct BandwidthResult {
  std::uint64_t size_bytes = 0;
  std::uint64_t repeats = 0;
  double gb_per_s = 0;
  std::uint64_t checksum = 0;
};

/// Streaming-read bandwidth over a freshly filled buffer. `size_bytes` must be
/// at least 1 MiB and a multiple of 8.
BandwidthResult measure_bandwidth(std::uint64_t size_bytes, std::uint64_t repeats);

// Buffer contents used by measure_bandwidth, exposed for checksum oracles.
void fill_words(std::span<std::uint64_t> words, std::uint64_t seed);

}  // namespace flowrt::hostbench
