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
#include <optional>
#include <string>
#include <vector>

#include "flowrt/analysis/affinity.hpp"
#include "flowrt/cft/module.hpp"
#include "flowrt/engine/host_env.hpp"
#include "flowrt/engine/instance.hpp"
#include "flowrt/error.hpp"
#include "flowrt/runtime/migration.hpp"
#include "flowrt/runtime/schedule.hpp"
#include "flowrt/topology/topology.hpp"

namespace flowrt::runtime {

enum class CompileMode : std::uint8_t { jit, aot };
std::string_view to_string(CompileMode m);

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  CompileMode mode = CompileMode::jit;
  std::uint64_t quantum = 1000;
  std::uint64_t seed = 0;  // reserved; no policy consumes randomness yet
  std::optional<MigrationPolicy> migration;
  std::optional<std::string> initial_region;  // unset: first declared region
  double ratio_threshold = analysis::kDefaultRatioThreshold;
};

struct ThreadReport {
  std::uint32_t tid = 0;
  std::string function;
  std::string device;
  double compute_ns = 0;
  double memory_stall_ns = 0;
  double compile_ns = 0;
  double busy_ns = 0;    // compute + stall + compile
  double finish_ns = 0;  // virtual clock when the thread stopped
  std::uint64_t instructions = 0;
  std::string status;
  std::optional<std::int32_t> result;
};

struct ScheduleRow {
  std::string function;
  std::string device_class;
  std::string device;
  std::string source;
  std::string rationale;
};

struct MigrationRow {
  std::uint64_t epoch = 0;
  std::uint64_t page = 0;
  std::string from_region;
  std::string to_region;
  double cost_ns = 0;
};

struct RunTotals {
  double compute_ns = 0;
  double memory_stall_ns = 0;
  double compile_ns = 0;
  double aot_compile_ns = 0;
  double migration_ns = 0;
  std::uint64_t instructions = 0;
  double total_simulated_ns = 0;  // latest thread finish + migration
};

struct RunReport {
  CompileMode mode = CompileMode::jit;
  RunConfig config;
  std::string exit_status;  // ok, trap or deadlock
  std::optional<std::string> trap;
  std::optional<std::uint32_t> trap_thread;
  std::int32_t exit_code = 0;
  std::vector<ScheduleRow> schedule;
  std::vector<ThreadReport> threads;
  std::vector<MigrationRow> migrations;
  RunTotals totals;

  bool ok() const { return exit_status == "ok"; }
};

// Pretty-printed, fixed key order, trailing newline.
std::string report_to_json(const RunReport& r);

struct StepRecord {
  std::uint32_t tid = 0;
  engine::StepOutcome outcome;
};

struct RunOutcome {
  RunReport report;
  std::vector<std::uint8_t> memory;
  std::vector<std::uint64_t> globals;
  double initial_compile_ns = 0;  // charged to thread 0 before its first step
  std::vector<StepRecord> steps;              // only when logging
  std::vector<engine::AccessEvent> accesses;  // only when logging
};

/// Validates, analyzes, schedules and executes `m`. Throws ConfigError for a
/// rejected module or configuration and ScheduleError when no cpu exists.
/// Traps and deadlocks are reported, not thrown.
RunOutcome run_detailed(const cft::Module& m, const topology::Topology& t, const RunConfig& cfg,
                        engine::HostEnv env, bool log = false);

RunReport run(const cft::Module& m, const topology::Topology& t, const RunConfig& cfg, engine::HostEnv env = {});

}  // namespace flowrt::runtime
