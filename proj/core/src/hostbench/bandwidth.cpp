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

#include "flowrt/hostbench/bandwidth.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <vector>

#include "flowrt/hostbench/prng.hpp"

namespace flowrt::hostbench {

StreamResult measure_stream(std::span<const std::uint64_t> words, std::uint64_t passes, std::uint64_t repeats) {
  if (words.empty() || passes == 0 || repeats == 0) {
    throw std::invalid_argument("measure_stream needs data, passes and repeats");
  }
  StreamResult out;
  const double bytes = static_cast<double>(words.size_bytes()) * static_cast<double>(passes);
  for (std::uint64_t r = 0; r < repeats; ++r) {
    std::uint64_t acc = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t p = 0; p < passes; ++p) {
      std::uint64_t x = 0;
      for (const std::uint64_t w : words) x ^= w;
      acc = x;
      // Stops the compiler from folding repeated passes into one.
      asm volatile("" : "+r"(acc) : : "memory");
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
    if (ns > 0) out.gb_per_s = std::max(out.gb_per_s, bytes / ns);
    out.checksum = acc;
  }
  return out;
}

void fill_words(std::span<std::uint64_t> words, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (auto& w : words) w = rng.next();
}

BandwidthResult measure_bandwidth(std::uint64_t size_bytes, std::uint64_t repeats) {
  if (size_bytes < kMinBandwidthBytes) throw std::invalid_argument("bandwidth size must be at least 1 MiB");
  if (size_bytes % 8 != 0) throw std::invalid_argument("bandwidth size must be a multiple of 8");
  std::vector<std::uint64_t> words(size_bytes / 8);
  fill_words(words, 0);
  const std::uint64_t target = std::uint64_t{64} << 20;
  const std::uint64_t passes = std::max<std::uint64_t>(1, target / size_bytes);
  const auto s = measure_stream(words, passes, repeats);
  return {size_bytes, repeats, s.gb_per_s, s.checksum};
}

}  // namespace flowrt::hostbench
