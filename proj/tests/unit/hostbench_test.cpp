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

#include <gtest/gtest.h>

#include <array>
#include <set>

#include <json.hpp>

#include "flowrt/hostbench/bandwidth.hpp"
#include "flowrt/hostbench/chase.hpp"
#include "flowrt/hostbench/prng.hpp"
#include "flowrt/hostbench/sweep.hpp"

namespace flowrt::hostbench {
namespace {

// Reference splitmix64, written out separately from the library class.
std::uint64_t reference_splitmix(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TEST(Prng, SeedZeroReferenceVector) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
}

TEST(Prng, PublishedSeedVector) {
  SplitMix64 rng(1234567);
  const std::array<std::uint64_t, 5> want = {6457827717110365317ULL, 3203168211198807973ULL,
                                             9817491932198370423ULL, 4593380528125082431ULL,
                                             16408922859458223821ULL};
  for (std::uint64_t w : want) EXPECT_EQ(rng.next(), w);
}

TEST(Prng, MatchesReferenceAndIsDeterministic) {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xffffffffffffffffULL}) {
    SplitMix64 a(seed), b(seed);
    std::uint64_t x = seed;
    for (int i = 0; i < 1000; ++i) {
      const std::uint64_t v = a.next();
      ASSERT_EQ(v, b.next());
      ASSERT_EQ(v, reference_splitmix(x));
      ASSERT_EQ(a.state(), b.state());
    }
  }
}

TEST(Prng, BelowStaysInRange) {
  SplitMix64 rng(9);
  for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 1000ULL, 1ULL << 40}) {
    for (int i = 0; i < 1000; ++i) ASSERT_LT(rng.below(bound), bound);
  }
}

// --- chains -----------------------------------------------------------------------

// Follows the successor links and returns the visited slots in order.
std::vector<std::uint64_t> walk(const ChaseBuffer& b) {
  std::vector<std::uint64_t> seen;
  std::uint64_t at = b.start;
  do {
    seen.push_back(at);
    at = b.slots.at(at);
  } while (at != b.start && seen.size() <= b.participating());
  return seen;
}

TEST(Chain, TwoSlotsFormTheOnlyCycle) {
  const auto b = build_chain(16, 8, 5);
  ASSERT_EQ(b.participating(), 2u);
  EXPECT_EQ(b.slots[0], 1u);
  EXPECT_EQ(b.slots[1], 0u);
}

TEST(Chain, SixteenSlotsVisitedOnce) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto b = build_chain(16 * 64, 64, seed);
    const auto seen = walk(b);
    EXPECT_EQ(seen.size(), 16u);
    EXPECT_EQ(std::set<std::uint64_t>(seen.begin(), seen.end()).size(), 16u);
  }
}

TEST(Chain, SingleCycleForEveryLengthUpTo4096) {
  for (std::uint64_t n = 2; n <= 4096; n += (n < 64 ? 1 : 37)) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto b = build_chain(n * 8, 8, seed);
      const auto seen = walk(b);
      ASSERT_EQ(seen.size(), n) << "n=" << n << " seed=" << seed;
      std::vector<bool> hit(n, false);
      for (std::uint64_t s : seen) {
        ASSERT_LT(s, n);
        ASSERT_FALSE(hit[s]);
        hit[s] = true;
      }
    }
  }
}

TEST(Chain, BadGeometry) {
  EXPECT_THROW(build_chain(4096, 4, 0), BadGeometry);
  EXPECT_THROW(build_chain(4096, 12, 0), BadGeometry);
  EXPECT_THROW(build_chain(8, 8, 0), BadGeometry);
  EXPECT_THROW(build_chain(4096, 8192, 0), BadGeometry);
  EXPECT_THROW(build_chain(4100, 8, 0), BadGeometry);
  EXPECT_NO_THROW(check_geometry(4096, 64));
}

TEST(Chain, SeedDeterminism) {
  EXPECT_EQ(build_chain(1 << 16, 64, 77).slots, build_chain(1 << 16, 64, 77).slots);
  EXPECT_NE(build_chain(1 << 16, 64, 77).slots, build_chain(1 << 16, 64, 78).slots);
}

TEST(Chain, StrideCoverage) {
  for (std::uint64_t stride : {8, 16, 64, 256, 4096}) {
    const auto b = build_chain(stride * 32, stride, 3);
    const std::uint64_t step = stride / 8;
    ASSERT_EQ(b.slots.size(), stride * 32 / 8);
    std::set<std::uint64_t> targets;
    for (std::uint64_t i = 0; i < b.slots.size(); ++i) {
      if (i % step == 0) {
        targets.insert(b.slots[i]);
      } else {
        ASSERT_EQ(b.slots[i], 0u) << "stride " << stride << " slot " << i;
      }
    }
    std::set<std::uint64_t> offsets;
    for (std::uint64_t k = 0; k < 32; ++k) offsets.insert(k * step);
    EXPECT_EQ(targets, offsets);
    EXPECT_EQ(b.start % step, 0u);
  }
}

// Exhaustive for n = 4: Sattolo yields only the (n-1)! cyclic permutations,
// and every one of them is reachable from some seed.
TEST(Chain, SattoloCoversAllCycles) {
  std::set<std::vector<std::uint64_t>> perms;
  for (std::uint64_t seed = 0; seed < 400; ++seed) perms.insert(build_chain(32, 8, seed).slots);
  EXPECT_EQ(perms.size(), 6u);
}

TEST(Measure, ChaseRowShape) {
  const auto b = build_chain(1 << 14, 64, 1);
  const auto row = measure_chase(b, 1 << 12, 3);
  EXPECT_EQ(row.size_bytes, 1u << 14);
  EXPECT_EQ(row.stride_bytes, 64u);
  EXPECT_EQ(row.loads, 1u << 12);
  EXPECT_EQ(row.repeats, 3u);
  EXPECT_GT(row.ns_per_load, 0.0);
  EXPECT_GE(row.mean_ns, row.ns_per_load);
  EXPECT_GE(row.stddev_ns, 0.0);
  // 4096 loads over a 256-slot cycle land back on the start slot.
  EXPECT_EQ(row.sink, b.start);
}

TEST(Measure, TooFewLoads) {
  const auto b = build_chain(1 << 14, 64, 1);
  EXPECT_THROW(measure_chase(b, 255, 1), std::invalid_argument);
  EXPECT_THROW(measure_chase(b, 256, 0), std::invalid_argument);
  EXPECT_NO_THROW(measure_chase(b, 256, 1));
}

TEST(Measure, SmallBufferIsFasterThanLarge) {
  const auto small = measure_chase(build_chain(4096, 64, 0), 1 << 20, 3);
  const auto large = measure_chase(build_chain(std::uint64_t{64} << 20, 64, 0), 1 << 20, 3);
  EXPECT_LT(small.ns_per_load, large.ns_per_load);
}

TEST(Measure, RepeatedMeasurementsAreStable) {
  const auto b = build_chain(1 << 20, 64, 2);
  const double a = measure_chase(b, 1 << 18, 5).ns_per_load;
  const double c = measure_chase(b, 1 << 18, 5).ns_per_load;
  EXPECT_LT(std::abs(a - c) / std::min(a, c), 0.5);
}

TEST(Bandwidth, ChecksumMatchesIndependentXor) {
  const std::uint64_t size = 1 << 20;
  const auto r = measure_bandwidth(size, 2);
  std::uint64_t x = 0, want = 0;
  for (std::uint64_t i = 0; i < size / 8; ++i) want ^= reference_splitmix(x);
  EXPECT_EQ(r.checksum, want);
  EXPECT_GT(r.gb_per_s, 0.0);
  EXPECT_EQ(r.size_bytes, size);
}

TEST(Bandwidth, Preconditions) {
  EXPECT_THROW(measure_bandwidth(4096, 1), std::invalid_argument);
  EXPECT_THROW(measure_bandwidth((1 << 20) + 4, 1), std::invalid_argument);
}

TEST(Bandwidth, CacheResidentStreamingIsNotSlower) {
  std::vector<std::uint64_t> small(4096 / 8), large((std::uint64_t{256} << 20) / 8);
  fill_words(small, 0);
  fill_words(large, 0);
  const auto s = measure_stream(small, 16384, 5);
  const auto l = measure_stream(large, 1, 3);
  EXPECT_LE(l.gb_per_s, s.gb_per_s);
}

// --- sweep ------------------------------------------------------------------------

TEST(Sweep, LadderArithmetic) {
  EXPECT_EQ(size_ladder(4096, 32768, 2, 64), (std::vector<std::uint64_t>{4096, 8192, 16384, 32768}));
  EXPECT_EQ(size_ladder(4096, std::uint64_t{256} << 20, 2, 64).size(), 17u);
  EXPECT_EQ(size_ladder(4096, 4096, 2, 64).size(), 1u);
  for (std::uint64_t s : size_ladder(1000, 100000, 1.5, 64)) EXPECT_EQ(s % 64, 0u);
}

TEST(Sweep, RowsCarryConfigVerbatim) {
  SweepConfig cfg;
  cfg.min_bytes = 4096;
  cfg.max_bytes = 32768;
  cfg.stride_bytes = 128;
  cfg.seed = 99;
  cfg.loads = 1024;
  cfg.repeats = 1;
  const auto rows = sweep(cfg);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.stride_bytes, 128u);
    EXPECT_EQ(r.seed, 99u);
    EXPECT_GE(r.loads, r.size_bytes / 128);
  }
  const std::string csv = rows_to_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "size_bytes,stride_bytes,loads,repeats,ns_per_load,stddev_ns");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  const auto j = nlohmann::json::parse(rows_to_json(rows));
  ASSERT_EQ(j.size(), 4u);
  EXPECT_EQ(j[0]["size_bytes"], 4096);
}

TEST(Sweep, BadStridePropagates) {
  SweepConfig cfg;
  cfg.min_bytes = 4096;
  cfg.max_bytes = 8192;
  cfg.stride_bytes = 12;
  EXPECT_THROW(sweep(cfg), BadGeometry);
}

}  // namespace
}  // namespace flowrt::hostbench
