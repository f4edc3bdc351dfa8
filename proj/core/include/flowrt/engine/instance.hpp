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
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "flowrt/cft/module.hpp"
#include "flowrt/engine/host_env.hpp"
#include "flowrt/error.hpp"
#include "flowrt/runtime/placement.hpp"
#include "flowrt/topology/topology.hpp"

namespace flowrt::engine {

enum class TrapKind : std::uint8_t { oob_memory, div_by_zero, unreachable, stack_exhausted, bad_host_args };
std::string_view to_string(TrapKind k);

enum class ThreadStatus : std::uint8_t { runnable, blocked_join, finished };
std::string_view to_string(ThreadStatus s);

struct CostBreakdown {
  double compute_ns = 0;
  double memory_stall_ns = 0;
  double compile_ns = 0;  // JIT charges taken while spawning
};

struct StepOutcome {
  enum class State : std::uint8_t { yielded, blocked, finished, trapped };

  std::uint64_t executed = 0;
  State state = State::yielded;
  std::optional<TrapKind> trap;
  CostBreakdown cost;
};

std::string_view to_string(StepOutcome::State s);

// One load, store or atomic as charged to the executing thread.
struct AccessEvent {
  std::uint32_t tid = 0;
  std::uint32_t device = 0;
  std::uint32_t region = 0;
  std::uint64_t page = 0;
  topology::AccessKind kind = topology::AccessKind::read;
  std::uint32_t bytes = 0;
  double cost_ns = 0;
};

struct ExecOptions {
  // Device index per function index; threads run on the device of their entry
  // function. Empty: everything runs on the first schedulable cpu device.
  std::vector<std::uint32_t> device_of_function;
  // Compile cost in ns charged to the spawning thread when a thread starts on
  // (function, device). Unset charges nothing.
  std::function<double(std::uint32_t function, std::uint32_t device)> compile_charge;
  std::function<void(const AccessEvent&)> on_access;
  // Region receiving pages added by memory.grow; falls back to any region with
  // room, in declaration order.
  std::optional<std::uint32_t> grow_region;
  std::uint32_t max_call_depth = 1024;
  std::uint32_t max_threads = 1024;
  std::size_t max_value_stack = std::size_t{1} << 20;
};

struct ThreadInfo {
  std::uint32_t tid = 0;
  std::uint32_t function = 0;
  std::uint32_t device = 0;
  std::uint32_t parent = 0;
  ThreadStatus status = ThreadStatus::runnable;
  std::uint32_t join_target = 0;         // valid while blocked_join
  std::optional<std::int32_t> result;    // set when the entry function returned
  double clock_ns = 0;                   // virtual time
  double compute_ns = 0;
  double memory_stall_ns = 0;
  double compile_ns = 0;
  std::uint64_t instructions = 0;
  std::uint64_t memory_ops = 0;
};

class InstantiationError : public Error {
 public:
  enum class Kind { placement_incomplete, import_not_satisfied, invalid_device };
  InstantiationError(Kind kind, const std::string& message);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// A running program: one shared linear memory, its threads and the virtual
/// host. Execution is single-threaded and deterministic; every thread sees the
/// same bytes, so stores are visible to subsequent loads in interleaving order.
/// The Module and Topology must outlive the Instance.
class Instance {
 public:
  /// Creates thread 0 running "main" with argument 0.
  static Instance instantiate(const cft::Module& m, const topology::Topology& t, runtime::Placement placement,
                              HostEnv env, ExecOptions options = {});

  /// Runs up to `quantum` instructions of `tid`. Traps are reported in the
  /// outcome and make the whole instance terminal.
  StepOutcome step_thread(std::uint32_t tid, std::uint64_t quantum);

  std::size_t thread_count() const { return threads_.size(); }
  const ThreadInfo& thread(std::uint32_t tid) const { return threads_.at(tid).info; }
  bool all_finished() const;
  bool any_runnable() const;

  std::optional<TrapKind> trap() const { return trap_; }
  std::optional<std::uint32_t> trap_thread() const { return trap_thread_; }
  std::optional<std::int32_t> exit_code() const { return exit_code_; }

  std::span<const std::uint8_t> memory() const { return memory_; }
  std::uint32_t memory_pages() const { return static_cast<std::uint32_t>(memory_.size() / cft::kWasmPageSize); }
  const std::vector<std::uint64_t>& globals() const { return globals_; }
  const HostState& host() const { return host_; }

  const runtime::Placement& placement() const { return placement_; }
  void set_placement(runtime::Placement p);
  runtime::AccessStats& stats() { return stats_; }
  const runtime::AccessStats& stats() const { return stats_; }

  const cft::Module& module() const { return *module_; }
  const topology::Topology& topology() const { return *topology_; }

 private:
  struct Label {
    std::uint32_t cont_pc;
    std::uint32_t height;
    bool has_value;
    bool is_loop;
  };
  struct Frame {
    std::uint32_t func;
    std::uint32_t pc;
    std::uint32_t locals_base;
    std::uint32_t labels_base;
    std::uint32_t stack_base;
  };
  struct Thread {
    ThreadInfo info;
    std::vector<std::uint64_t> stack;
    std::vector<std::uint64_t> locals;
    std::vector<Frame> frames;
    std::vector<Label> labels;
  };
  // Block structure of a defined function, resolved once.
  struct CompiledFunc {
    std::vector<std::uint32_t> match_end;   // block/loop/if -> matching end
    std::vector<std::uint32_t> match_else;  // if -> else, or matching end
    std::uint32_t local_count = 0;          // params + locals
    std::uint32_t param_count = 0;
    bool has_result = false;
  };
  // Per-step accumulators, folded into the thread at flush points.
  struct Pending {
    std::uint64_t instructions = 0;
    double stall_ns = 0;
    CostBreakdown outcome;
  };

  Instance() = default;

  std::uint32_t device_for(std::uint32_t func) const;
  std::uint32_t spawn(std::uint32_t parent, std::uint32_t func, std::uint32_t arg, bool charge_parent);
  void flush(Thread& th, Pending& p);
  bool enter(Thread& th, std::uint32_t func);  // false on stack exhaustion
  bool leave(Thread& th);                       // true when the thread finished
  void finish_thread(std::uint32_t tid, std::optional<std::int32_t> result);
  // Returns false when the call trapped; sets `blocked` for a pending join.
  bool host_call(std::uint32_t tid, Pending& p, cft::HostFn fn, bool& blocked, bool& exited);
  bool grow_memory(std::uint32_t delta_pages);
  double charge_access(Thread& th, std::uint64_t addr, topology::AccessKind kind, std::uint32_t bytes);

  const cft::Module* module_ = nullptr;
  const topology::Topology* topology_ = nullptr;
  ExecOptions options_;
  std::vector<CompiledFunc> compiled_;
  std::vector<topology::AccessCost> costs_;  // devices x regions
  std::vector<double> compute_rate_;         // per device
  std::vector<std::uint8_t> memory_;
  std::vector<std::uint64_t> globals_;
  std::vector<Thread> threads_;
  HostState host_;
  runtime::Placement placement_;
  runtime::AccessStats stats_;
  std::optional<TrapKind> trap_;
  std::optional<std::uint32_t> trap_thread_;
  std::optional<std::int32_t> exit_code_;
};

}  // namespace flowrt::engine
