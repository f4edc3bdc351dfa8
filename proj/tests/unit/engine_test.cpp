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

#include <cstring>
#include <random>
#include <sstream>

#include "flowrt/cft/validate.hpp"
#include "flowrt/engine/instance.hpp"
#include "test_support.hpp"

namespace flowrt::engine {
namespace {

using cft::parse_module;
using flowrt::testing::main_module;
using flowrt::testing::single_cpu;
using runtime::Placement;

constexpr const char* kThreadImports =
    "(import \"codeflow\" \"spawn\" (func $spawn (param i32 i32) (result i32)))"
    " (import \"codeflow\" \"join\" (func $join (param i32) (result i32)))";

Placement whole(const cft::Module& m, std::uint32_t region = 0) {
  return Placement::uniform(m.memory().min_pages * cft::kWasmPageSize / runtime::kPlacementPageSize, region);
}

// Round-robin in tid order until every thread is done, something traps, or
// nothing can run. Returns the number of scheduling rounds.
std::size_t drive(Instance& inst, std::uint64_t quantum, std::size_t max_rounds = 1'000'000) {
  std::size_t rounds = 0;
  while (!inst.all_finished() && !inst.trap() && inst.any_runnable() && rounds < max_rounds) {
    ++rounds;
    for (std::uint32_t tid = 0; tid < inst.thread_count(); ++tid) {
      if (inst.thread(tid).status != ThreadStatus::runnable) continue;
      const auto out = inst.step_thread(tid, quantum);
      EXPECT_LE(out.executed, quantum);
      if (out.state == StepOutcome::State::trapped) return rounds;
    }
  }
  return rounds;
}

struct Program {
  cft::Module module;
  topology::Topology topo = single_cpu();
  std::optional<Instance> inst;

  explicit Program(const std::string& text, HostEnv env = {}, ExecOptions opts = {}) : module(parse_module(text)) {
    EXPECT_TRUE(cft::validate_module(module).empty()) << text;
    inst.emplace(Instance::instantiate(module, topo, whole(module), std::move(env), std::move(opts)));
  }
  std::optional<std::int32_t> main_result(std::uint64_t quantum = 1000) {
    drive(*inst, quantum);
    return inst->thread(0).result;
  }
};

std::uint32_t load_u32(std::span<const std::uint8_t> mem, std::size_t at) {
  std::uint32_t v;
  std::memcpy(&v, mem.data() + at, 4);
  return v;
}

// --- instantiate ---------------------------------------------------------------

TEST(Instantiate, MinimalModule) {
  const auto m = parse_module(main_module("(i32.const 0)", "", "(memory shared 2 4)"));
  const auto t = single_cpu();
  const auto inst = Instance::instantiate(m, t, whole(m), {});
  EXPECT_EQ(inst.thread_count(), 1u);
  EXPECT_EQ(inst.thread(0).status, ThreadStatus::runnable);
  EXPECT_EQ(inst.thread(0).function, m.entry);
  EXPECT_EQ(inst.memory().size(), 2u * 65536u);
  EXPECT_EQ(inst.memory_pages(), 2u);
  for (std::uint8_t b : inst.memory()) ASSERT_EQ(b, 0);
  EXPECT_EQ(inst.thread(0).clock_ns, 0.0);
}

TEST(Instantiate, UnregisteredImport) {
  auto m = parse_module(main_module("(i32.const 0)", "(import \"wasi\" \"proc_exit\" (func (param i32)))"));
  m.imports[0].name = "proc_abort";
  const auto t = single_cpu();
  try {
    Instance::instantiate(m, t, whole(m), {});
    FAIL();
  } catch (const InstantiationError& e) {
    EXPECT_EQ(e.kind(), InstantiationError::Kind::import_not_satisfied);
  }
}

TEST(Instantiate, PlacementMissingPages) {
  const auto m = parse_module(main_module("(i32.const 0)"));
  const auto t = single_cpu();
  try {
    Instance::instantiate(m, t, Placement::uniform(15, 0), {});
    FAIL();
  } catch (const InstantiationError& e) {
    EXPECT_EQ(e.kind(), InstantiationError::Kind::placement_incomplete);
  }
  EXPECT_THROW(Instance::instantiate(m, t, Placement::uniform(16, 3), {}), InstantiationError);
}

// --- semantics -------------------------------------------------------------------

TEST(Semantics, SubtractLeavesTwo) {
  Program r(main_module("i32.const 7 i32.const 5 i32.sub"));
  EXPECT_EQ(r.main_result(), 2);
}

TEST(Semantics, WraparoundAndUnsignedOps) {
  EXPECT_EQ(Program(main_module("(i32.add (i32.const 0x7fffffff) (i32.const 1))")).main_result(), INT32_MIN);
  EXPECT_EQ(Program(main_module("(i32.div_u (i32.const -1) (i32.const 2))")).main_result(), 0x7fffffff);
  EXPECT_EQ(Program(main_module("(i32.rem_u (i32.const -1) (i32.const 10))")).main_result(), 5);
  EXPECT_EQ(Program(main_module("(i32.shr_u (i32.const -8) (i32.const 1))")).main_result(), 0x7ffffffc);
  EXPECT_EQ(Program(main_module("(i32.shl (i32.const 1) (i32.const 33))")).main_result(), 2);
  EXPECT_EQ(Program(main_module("(i32.lt_s (i32.const -1) (i32.const 0))")).main_result(), 1);
  EXPECT_EQ(Program(main_module("(i32.lt_u (i32.const -1) (i32.const 0))")).main_result(), 0);
  EXPECT_EQ(Program(main_module("(i32.wrap_i64 (i64.shr_u (i64.const -1) (i64.const 32)))")).main_result(), -1);
  EXPECT_EQ(Program(main_module("(i32.wrap_i64 (i64.shr_u (i64.extend_i32_u (i32.const -1)) (i64.const 31)))"))
                .main_result(),
            1);
  EXPECT_EQ(Program(main_module("(select (i32.const 4) (i32.const 5) (i32.const 0))")).main_result(), 5);
}

TEST(Semantics, LittleEndianMemory) {
  Program r(main_module("(i32.store (i32.const 8) (i32.const 0x11223344)) (i32.load8_u (i32.const 8))"));
  EXPECT_EQ(r.main_result(), 0x44);
  Program wide(main_module("(i64.store (i32.const 0) (i64.const 0x0102030405060708)) (i32.load offset=4 (i32.const 0))"));
  EXPECT_EQ(wide.main_result(), 0x01020304);
}

TEST(Semantics, ControlFlow) {
  // sum 1..10 with a loop
  const std::string body =
      "(local $i i32) (local $s i32)"
      " (block $done (loop $next"
      "   (local.set $i (i32.add (local.get $i) (i32.const 1)))"
      "   (local.set $s (i32.add (local.get $s) (local.get $i)))"
      "   (br_if $done (i32.eq (local.get $i) (i32.const 10)))"
      "   (br $next)))"
      " (local.get $s)";
  EXPECT_EQ(Program(main_module(body)).main_result(), 55);
  EXPECT_EQ(Program(main_module("(if (result i32) (i32.const 0) (then (i32.const 1)) (else (i32.const 2)))"))
                .main_result(),
            2);
  EXPECT_EQ(Program(main_module("(block (result i32) (br 0 (i32.const 9)) )")).main_result(), 9);
  EXPECT_EQ(Program(main_module("(return (i32.const 4)) ")).main_result(), 4);
}

TEST(Semantics, CallsAndRecursion) {
  const std::string fib =
      "(func $fib (param $n i32) (result i32)"
      " (if (result i32) (i32.lt_u (local.get $n) (i32.const 2)) (then (local.get $n))"
      "  (else (i32.add (call $fib (i32.sub (local.get $n) (i32.const 1)))"
      "                 (call $fib (i32.sub (local.get $n) (i32.const 2)))))))";
  EXPECT_EQ(Program(main_module("(call $fib (i32.const 15))", fib)).main_result(), 610);
}

TEST(Semantics, Globals) {
  EXPECT_EQ(Program(main_module("(global.set $g (i32.add (global.get $g) (i32.const 5))) (global.get $g)",
                            "(global $g (mut i32) (i32.const 37))"))
                .main_result(),
            42);
}

TEST(Traps, StoreAtMemoryLength) {
  Program r(main_module("(i32.store (i32.const 65536) (i32.const 1)) (i32.const 0)"));
  drive(*r.inst, 100);
  EXPECT_EQ(r.inst->trap(), TrapKind::oob_memory);
  EXPECT_EQ(r.inst->trap_thread(), 0u);
  EXPECT_FALSE(r.inst->thread(0).result.has_value());
}

TEST(Traps, OffsetOverflowIsOutOfBounds) {
  Program r(main_module("(i32.load offset=4294967295 (i32.const 8))"));
  drive(*r.inst, 100);
  EXPECT_EQ(r.inst->trap(), TrapKind::oob_memory);
}

TEST(Traps, Kinds) {
  {
    Program r(main_module("(i32.div_u (i32.const 1) (i32.const 0))"));
    drive(*r.inst, 100);
    EXPECT_EQ(r.inst->trap(), TrapKind::div_by_zero);
  }
  {
    Program r(main_module("unreachable"));
    drive(*r.inst, 100);
    EXPECT_EQ(r.inst->trap(), TrapKind::unreachable);
  }
  {
    Program r(main_module("(call $f)", "(func $f (result i32) (call $f))"));
    drive(*r.inst, 1000);
    EXPECT_EQ(r.inst->trap(), TrapKind::stack_exhausted);
  }
  {
    Program r(main_module("(call $join (i32.const 5))", kThreadImports));
    drive(*r.inst, 100);
    EXPECT_EQ(r.inst->trap(), TrapKind::bad_host_args);
  }
}

TEST(Traps, TrapIsTerminal) {
  Program r(main_module("(i32.div_u (i32.const 1) (i32.const 0))"));
  r.inst->step_thread(0, 100);
  const auto again = r.inst->step_thread(0, 100);
  EXPECT_EQ(again.executed, 0u);
  EXPECT_EQ(again.state, StepOutcome::State::trapped);
}

TEST(Memory, GrowAndSize) {
  Program r(main_module("(drop (memory.grow (i32.const 2))) (memory.size)", "", "(memory shared 1 4)"));
  EXPECT_EQ(r.main_result(), 3);
  EXPECT_EQ(r.inst->memory().size(), 3u * 65536u);
  EXPECT_EQ(r.inst->placement().page_count(), 3u * 16u);
  Program over(main_module("(memory.grow (i32.const 4))", "", "(memory shared 1 4)"));
  EXPECT_EQ(over.main_result(), -1);
}

// --- cost accounting -------------------------------------------------------------

TEST(Cost, HundredInstructionsNoMemory) {
  std::string body;
  for (int i = 0; i < 99; ++i) body += "nop ";
  body += "i32.const 0";
  Program r(main_module(body));
  r.main_result();
  EXPECT_EQ(r.inst->thread(0).instructions, 100u);
  EXPECT_DOUBLE_EQ(r.inst->thread(0).compute_ns, 100.0);
  EXPECT_DOUBLE_EQ(r.inst->thread(0).memory_stall_ns, 0.0);
}

TEST(Cost, OneLoadOneStore) {
  Program r(main_module("(i32.store (i32.const 0) (i32.const 1)) (i32.load (i32.const 0))"));
  r.main_result();
  // read_ns 100, write_ns 100, 40 GB/s, 4 bytes each
  EXPECT_DOUBLE_EQ(r.inst->thread(0).memory_stall_ns, 2 * (100 + 4.0 / 40));
  EXPECT_EQ(r.inst->thread(0).memory_ops, 2u);
}

TEST(Cost, StepOutcomeBreakdownMatchesThreadTotals) {
  Program r(main_module("(local $i i32) (loop $l (i32.store (i32.const 16) (local.get $i))"
                    " (br_if $l (i32.lt_u (local.tee $i (i32.add (local.get $i) (i32.const 1))) (i32.const 50))))"
                    " (i32.load (i32.const 16))"));
  double compute = 0, stall = 0;
  for (int guard = 0; guard < 1000 && !r.inst->all_finished(); ++guard) {
    const auto out = r.inst->step_thread(0, 7);
    compute += out.cost.compute_ns;
    stall += out.cost.memory_stall_ns;
  }
  EXPECT_EQ(r.inst->thread(0).result, 49);
  EXPECT_DOUBLE_EQ(compute, r.inst->thread(0).compute_ns);
  EXPECT_DOUBLE_EQ(stall, r.inst->thread(0).memory_stall_ns);
}

// --- host calls ------------------------------------------------------------------

TEST(Host, FdReadShortFile) {
  HostEnv env;
  env.files[3] = {'a', 'b', 'c'};
  Program r(main_module("(call $fd_read (i32.const 3) (i32.const 100) (i32.const 10) (i32.const 200))",
                    "(import \"wasi\" \"fd_read\" (func $fd_read (param i32 i32 i32 i32) (result i32)))"),
        env);
  EXPECT_EQ(r.main_result(), 3);
  const auto mem = r.inst->memory();
  EXPECT_EQ(std::string(mem.begin() + 100, mem.begin() + 103), "abc");
  EXPECT_EQ(mem[103], 0);
  EXPECT_EQ(load_u32(mem, 200), 3u);
}

TEST(Host, FdWriteAppendsToVirtualFile) {
  Program r(main_module("(i32.store (i32.const 0) (i32.const 0x6f6c6568))"
                    " (drop (call $fd_write (i32.const 1) (i32.const 0) (i32.const 4) (i32.const 8)))"
                    " (call $fd_write (i32.const 1) (i32.const 0) (i32.const 2) (i32.const 8))",
                    "(import \"wasi\" \"fd_write\" (func $fd_write (param i32 i32 i32 i32) (result i32)))"));
  EXPECT_EQ(r.main_result(), 2);
  const auto& out = r.inst->host().files.at(1);
  EXPECT_EQ(std::string(out.begin(), out.end()), "helohe");
}

TEST(Host, LoopbackSocket) {
  Program r(main_module("(i32.store (i32.const 0) (i32.const 0x04030201))"
                    " (drop (call $send (i32.const 0) (i32.const 4)))"
                    " (drop (call $recv (i32.const 64) (i32.const 3)))"
                    " (i32.load (i32.const 64))",
                    "(import \"wasi\" \"sock_send\" (func $send (param i32 i32) (result i32)))"
                    " (import \"wasi\" \"sock_recv\" (func $recv (param i32 i32) (result i32)))"));
  EXPECT_EQ(r.main_result(), 0x030201);
  EXPECT_EQ(r.inst->host().loopback.size(), 1u);
}

TEST(Host, ClockReadsVirtualTime) {
  Program r(main_module("(local $t i32) nop nop nop"
                    " (drop (call $clock (i32.const 0)))"
                    " (i32.wrap_i64 (i64.load (i32.const 0)))",
                    "(import \"wasi\" \"clock_time_get\" (func $clock (param i32) (result i32)))"));
  // nop nop nop const call: five instructions at 1 ns before the clock is read
  EXPECT_EQ(r.main_result(), 5);
}

TEST(Host, SpawnCreatesRunnableThread) {
  Program r(main_module("(call $spawn (i32.const 0) (i32.const 42))",
                    std::string(kThreadImports) + " (func $w (param i32) (result i32) (local.get 0)) (threads $w)"));
  r.inst->step_thread(0, 1000);
  ASSERT_EQ(r.inst->thread_count(), 2u);
  EXPECT_EQ(r.inst->thread(0).result, 1);
  EXPECT_EQ(r.inst->thread(1).status, ThreadStatus::runnable);
  EXPECT_EQ(r.inst->thread(1).parent, 0u);
  r.inst->step_thread(1, 1000);
  EXPECT_EQ(r.inst->thread(1).result, 42);
}

TEST(Host, JoinBlocksUntilTargetFinishes) {
  Program r(main_module("(i32.add (call $join (call $spawn (i32.const 0) (i32.const 20))) (i32.const 1))",
                    std::string(kThreadImports) +
                        " (func $w (param i32) (result i32) (i32.mul (local.get 0) (i32.const 2))) (threads $w)"));
  const auto first = r.inst->step_thread(0, 1000);
  EXPECT_EQ(first.state, StepOutcome::State::blocked);
  EXPECT_EQ(r.inst->thread(0).status, ThreadStatus::blocked_join);
  EXPECT_EQ(r.inst->thread(0).join_target, 1u);
  r.inst->step_thread(1, 1000);
  EXPECT_EQ(r.inst->thread(0).status, ThreadStatus::runnable);
  EXPECT_GE(r.inst->thread(0).clock_ns, r.inst->thread(1).clock_ns);
  r.inst->step_thread(0, 1000);
  EXPECT_EQ(r.inst->thread(0).result, 41);
}

TEST(Host, ProcExitFinishesEveryThread) {
  Program r(main_module("(drop (call $spawn (i32.const 0) (i32.const 0))) (call $exit (i32.const 3)) (i32.const 0)",
                    std::string(kThreadImports) +
                        " (import \"wasi\" \"proc_exit\" (func $exit (param i32)))"
                        " (func $w (param i32) (result i32) (loop $l (br $l)) (i32.const 0)) (threads $w)"));
  drive(*r.inst, 50);
  EXPECT_TRUE(r.inst->all_finished());
  EXPECT_EQ(r.inst->exit_code(), 3);
}

TEST(Host, BadPointerTraps) {
  Program r(main_module("(call $fd_read (i32.const 3) (i32.const 65530) (i32.const 10) (i32.const 0))",
                    "(import \"wasi\" \"fd_read\" (func $fd_read (param i32 i32 i32 i32) (result i32)))"));
  drive(*r.inst, 100);
  EXPECT_EQ(r.inst->trap(), TrapKind::bad_host_args);
}

// --- threads and atomics -----------------------------------------------------------

std::string counter_program(int threads, int iters) {
  std::ostringstream s;
  s << "(module (memory shared 1 1) " << kThreadImports
    << " (func $w (param $n i32) (result i32) (local $i i32)"
       "  (block $done (loop $l"
       "   (br_if $done (i32.ge_u (local.get $i) (local.get $n)))"
       "   (drop (i32.atomic.rmw.add (i32.const 64) (i32.const 1)))"
       "   (local.set $i (i32.add (local.get $i) (i32.const 1)))"
       "   (br $l)))"
       "  (i32.const 0))"
       " (func $main (param i32) (result i32) (local $k i32)"
       "  (block $d (loop $s (br_if $d (i32.ge_u (local.get $k) (i32.const "
    << threads
    << ")))"
       "   (i32.store (i32.add (i32.const 128) (i32.shl (local.get $k) (i32.const 2)))"
       "     (call $spawn (i32.const 0) (i32.const "
    << iters
    << ")))"
       "   (local.set $k (i32.add (local.get $k) (i32.const 1))) (br $s)))"
       "  (local.set $k (i32.const 0))"
       "  (block $d2 (loop $j (br_if $d2 (i32.ge_u (local.get $k) (i32.const "
    << threads
    << ")))"
       "   (drop (call $join (i32.load (i32.add (i32.const 128) (i32.shl (local.get $k) (i32.const 2))))))"
       "   (local.set $k (i32.add (local.get $k) (i32.const 1))) (br $j)))"
       "  (i32.atomic.load (i32.const 64)))"
       " (threads $w) (export \"main\" (func $main)))";
  return s.str();
}

TEST(Atomics, FourThreadsThousandAdds) {
  for (std::uint64_t q : {1, 2, 3, 5, 17, 1000}) {
    Program r(counter_program(4, 1000));
    EXPECT_EQ(r.main_result(q), 4000) << "quantum " << q;
    EXPECT_EQ(load_u32(r.inst->memory(), 64), 4000u);
  }
}

TEST(Atomics, CmpxchgSemantics) {
  EXPECT_EQ(Program(main_module("(i32.store (i32.const 0) (i32.const 5))"
                            " (drop (i32.atomic.rmw.cmpxchg (i32.const 0) (i32.const 5) (i32.const 9)))"
                            " (i32.load (i32.const 0))"))
                .main_result(),
            9);
  EXPECT_EQ(Program(main_module("(i32.store (i32.const 0) (i32.const 5))"
                            " (i32.atomic.rmw.cmpxchg (i32.const 0) (i32.const 4) (i32.const 9))"))
                .main_result(),
            5);
}

TEST(Coherence, ConsumerSeesProducerStores) {
  // The producer writes a payload then raises a flag; the consumer spins on the
  // flag and returns the payload it observes.
  const std::string text =
      std::string("(module (memory shared 1 1) ") + kThreadImports +
      " (func $producer (param i32) (result i32)"
      "  (i32.store (i32.const 256) (i32.const 0x5eed))"
      "  (i32.atomic.store (i32.const 512) (i32.const 1)) (i32.const 0))"
      " (func $consumer (param i32) (result i32)"
      "  (loop $wait (br_if $wait (i32.eqz (i32.atomic.load (i32.const 512)))))"
      "  (i32.load (i32.const 256)))"
      " (func $main (param i32) (result i32) (local $c i32)"
      "  (local.set $c (call $spawn (i32.const 1) (i32.const 0)))"
      "  (drop (call $spawn (i32.const 0) (i32.const 0)))"
      "  (call $join (local.get $c)))"
      " (threads $producer $consumer) (export \"main\" (func $main)))";
  for (std::uint64_t q = 1; q <= 9; ++q) {
    Program r(text);
    EXPECT_EQ(r.main_result(q), 0x5eed) << "quantum " << q;
  }
}

TEST(Coherence, AccessLogMatchesCharges) {
  std::vector<AccessEvent> log;
  ExecOptions opts;
  opts.on_access = [&](const AccessEvent& e) { log.push_back(e); };
  Program r(counter_program(3, 40), {}, opts);
  EXPECT_EQ(r.main_result(3), 120);
  std::vector<double> per_thread(r.inst->thread_count(), 0.0);
  std::vector<std::uint64_t> ops(r.inst->thread_count(), 0);
  for (const auto& e : log) {
    const auto& c = r.topo.cost(e.device, e.region);
    const double want = (e.kind == topology::AccessKind::read ? c.read_latency_ns : c.write_latency_ns) +
                        static_cast<double>(e.bytes) / c.bandwidth_gbps;
    ASSERT_DOUBLE_EQ(e.cost_ns, want);
    ASSERT_LT(e.page, r.inst->placement().page_count());
    ASSERT_EQ(e.region, r.inst->placement().region_of(e.page));
    per_thread[e.tid] += e.cost_ns;
    ++ops[e.tid];
  }
  for (std::uint32_t tid = 0; tid < r.inst->thread_count(); ++tid) {
    const auto& th = r.inst->thread(tid);
    EXPECT_NEAR(th.memory_stall_ns, per_thread[tid], 1e-9 * std::max(1.0, per_thread[tid]));
    EXPECT_EQ(th.memory_ops, ops[tid]);
    EXPECT_DOUBLE_EQ(th.compute_ns, static_cast<double>(th.instructions) * 1.0);
  }
}

TEST(Determinism, RepeatedRunsAreBitIdentical) {
  auto once = [] {
    Program r(counter_program(4, 200));
    r.main_result(7);
    std::vector<double> clocks;
    for (std::uint32_t tid = 0; tid < r.inst->thread_count(); ++tid) clocks.push_back(r.inst->thread(tid).clock_ns);
    return std::make_pair(std::vector<std::uint8_t>(r.inst->memory().begin(), r.inst->memory().end()), clocks);
  };
  const auto a = once();
  for (int i = 0; i < 3; ++i) EXPECT_EQ(once(), a);
}

// --- trap safety fuzz --------------------------------------------------------------

// Emits well-typed CFT: every expression is generated for a requested result
// type, so the module validates and any failure is a runtime trap.
class ProgramGen {
 public:
  explicit ProgramGen(std::uint64_t seed) : rng_(seed) {}

  std::string make() {
    std::string helper = "(func $h (param $x i32) (result i32) (local $y i64) " + stmts(3) + expr(cft::ValType::i32, 3) + ")";
    std::string worker = "(func $w (param $x i32) (result i32) (local $y i64) " + stmts(3) + expr(cft::ValType::i32, 3) + ")";
    std::string main = "(func $main (param $x i32) (result i32) (local $y i64) " + stmts(4) + expr(cft::ValType::i32, 3) + ")";
    return std::string("(module (memory shared 1 3) ") + kThreadImports +
           " (import \"wasi\" \"fd_read\" (func $fd_read (param i32 i32 i32 i32) (result i32)))"
           " (global $g (mut i32) (i32.const 0)) (global $G (mut i64) (i64.const 0)) " +
           helper + " " + worker + " " + main + " (threads $w) (export \"main\" (func $main)))";
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string addr() {
    switch (pick(0, 4)) {
      case 0: return "(i32.const " + std::to_string(pick(0, 65535)) + ")";
      case 1: return "(i32.const " + std::to_string(65536 - pick(0, 8)) + ")";
      case 2: return "(i32.const " + std::to_string(static_cast<std::int32_t>(rng_())) + ")";
      default: return expr(cft::ValType::i32, 1);
    }
  }
  std::string offset() { return pick(0, 3) == 0 ? " offset=" + std::to_string(pick(0, 70000)) : ""; }

  std::string expr(cft::ValType t, int depth) {
    const bool leaf = depth <= 0 || pick(0, 3) == 0;
    if (t == cft::ValType::i64) {
      if (leaf) {
        return pick(0, 1) ? "(i64.const " + std::to_string(static_cast<std::int64_t>(rng_() >> pick(0, 63))) + ")"
                          : std::string(pick(0, 1) ? "(local.get $y)" : "(global.get $G)");
      }
      static constexpr std::array<const char*, 10> bin = {"i64.add", "i64.sub", "i64.mul", "i64.div_u", "i64.rem_u",
                                                         "i64.and", "i64.or",  "i64.xor", "i64.shl",   "i64.shr_u"};
      switch (pick(0, 3)) {
        case 0: return "(i64.extend_i32_u " + expr(cft::ValType::i32, depth - 1) + ")";
        case 1: return "(i64.load" + offset() + " " + addr() + ")";
        default:
          return std::string("(") + bin[static_cast<std::size_t>(pick(0, 9))] + " " + expr(t, depth - 1) + " " +
                 expr(t, depth - 1) + ")";
      }
    }
    if (leaf) {
      switch (pick(0, 3)) {
        case 0: return "(local.get $x)";
        case 1: return "(global.get $g)";
        case 2: return "(memory.size)";
        default: return "(i32.const " + std::to_string(static_cast<std::int32_t>(rng_() >> pick(0, 31))) + ")";
      }
    }
    static constexpr std::array<const char*, 17> bin = {
        "i32.add", "i32.sub",  "i32.mul", "i32.div_u", "i32.rem_u", "i32.and",  "i32.or",   "i32.xor", "i32.shl",
        "i32.shr_u", "i32.eq", "i32.ne",  "i32.lt_u",  "i32.lt_s",  "i32.gt_u", "i32.ge_u", "i32.add"};
    const int d = depth - 1;
    switch (pick(0, 14)) {
      case 0: return "(i32.eqz " + expr(t, d) + ")";
      case 1: return "(i32.wrap_i64 " + expr(cft::ValType::i64, d) + ")";
      case 2: return "(i32.load" + offset() + " " + addr() + ")";
      case 3: return "(i32.load8_u" + offset() + " " + addr() + ")";
      case 4: return "(i32.atomic.load" + offset() + " " + addr() + ")";
      case 5: return "(i32.atomic.rmw.add" + offset() + " " + addr() + " " + expr(t, d) + ")";
      case 6: return "(i32.atomic.rmw.cmpxchg " + addr() + " " + expr(t, d) + " " + expr(t, d) + ")";
      case 7: return "(memory.grow (i32.const " + std::to_string(pick(0, 3)) + "))";
      case 8: return "(select " + expr(t, d) + " " + expr(t, d) + " " + expr(t, d) + ")";
      case 9: return "(if (result i32) " + expr(t, d) + " (then " + expr(t, d) + ") (else " + expr(t, d) + "))";
      case 10: return "(call $h " + expr(t, d) + ")";
      case 11:
        return "(block $b (result i32) (drop (br_if $b " + expr(t, d) + " " + expr(t, d) + ")) " + expr(t, d) + ")";
      case 12: return "(call $spawn (i32.const " + std::to_string(pick(0, 1)) + ") " + expr(t, d) + ")";
      case 13: return "(call $join " + expr(t, d) + ")";
      default:
        return std::string("(") + bin[static_cast<std::size_t>(pick(0, 16))] + " " + expr(t, d) + " " + expr(t, d) + ")";
    }
  }

  std::string stmts(int n) {
    std::string s;
    for (int i = 0, k = pick(0, n); i < k; ++i) {
      switch (pick(0, 9)) {
        case 0: s += "(i32.store" + offset() + " " + addr() + " " + expr(cft::ValType::i32, 2) + ") "; break;
        case 1: s += "(i64.store" + offset() + " " + addr() + " " + expr(cft::ValType::i64, 2) + ") "; break;
        case 2: s += "(i32.store8 " + addr() + " " + expr(cft::ValType::i32, 2) + ") "; break;
        case 3: s += "(i32.atomic.store " + addr() + " " + expr(cft::ValType::i32, 2) + ") "; break;
        case 4: s += "(global.set $g " + expr(cft::ValType::i32, 2) + ") "; break;
        case 5: s += "(local.set $y " + expr(cft::ValType::i64, 2) + ") "; break;
        case 6: s += "(drop " + expr(cft::ValType::i32, 3) + ") "; break;
        case 7:
          s += "(drop (call $fd_read (i32.const " + std::to_string(pick(0, 4)) + ") " + addr() + " (i32.const " +
               std::to_string(pick(0, 64)) + ") " + addr() + ")) ";
          break;
        case 8: s += pick(0, 9) == 0 ? "unreachable " : "nop "; break;
        default:
          s += "(loop $l (br_if $l (i32.lt_u (global.get $g) (i32.const " + std::to_string(pick(0, 40)) +
               "))) (global.set $g (i32.add (global.get $g) (i32.const 1)))) ";
          break;
      }
    }
    return s;
  }

  std::mt19937_64 rng_;
};

TEST(Fuzz, WellTypedProgramsEndCleanly) {
  HostEnv env;
  env.files[3] = std::vector<std::uint8_t>(100, 7);
  int trapped = 0, finished = 0;
  for (std::uint64_t seed = 0; seed < 600; ++seed) {
    ProgramGen gen(seed);
    const std::string text = gen.make();
    const auto m = parse_module(text);
    const auto report = cft::validate_module(m);
    ASSERT_TRUE(report.empty()) << report.findings[0].rule << ": " << report.findings[0].message << "\n" << text;
    const auto t = single_cpu();
    ExecOptions opts;
    opts.max_threads = 16;
    opts.max_call_depth = 256;
    auto inst = Instance::instantiate(m, t, whole(m), env, opts);
    drive(inst, 1 + seed % 13, 20000);
    if (inst.trap()) {
      ++trapped;
    } else if (inst.thread(0).result) {
      ++finished;
    }
  }
  // The generator must exercise both outcomes to be meaningful.
  EXPECT_GT(trapped, 50);
  EXPECT_GT(finished, 50);
}

TEST(Fuzz, RawInstructionSequencesNeverCrash) {
  // Random flat bodies, kept only when they validate.
  std::mt19937_64 rng(99);
  int ran = 0;
  for (int iter = 0; iter < 20000 && ran < 400; ++iter) {
    cft::Module m = parse_module(main_module("(i32.const 0)", "(global $g (mut i32) (i32.const 3))"));
    auto& body = m.functions[0].body;
    body.clear();
    for (int k = 0, n = 1 + static_cast<int>(rng() % 12); k < n; ++k) {
      cft::Instruction ins;
      ins.op = static_cast<cft::Opcode>(rng() % cft::kOpcodeCount);
      if (ins.op == cft::Opcode::call || ins.op == cft::Opcode::else_ || ins.op == cft::Opcode::end ||
          ins.op == cft::Opcode::block || ins.op == cft::Opcode::loop || ins.op == cft::Opcode::if_) {
        ins.op = cft::Opcode::nop;
      }
      ins.value = static_cast<std::int32_t>(rng());
      ins.index = static_cast<std::uint32_t>(rng() % 3);
      if (cft::info(ins.op).imm == cft::Imm::mem_offset) ins.index = static_cast<std::uint32_t>(rng() % 70000);
      body.push_back(ins);
    }
    if (!cft::validate_module(m).empty()) continue;
    ++ran;
    const auto t = single_cpu();
    auto inst = Instance::instantiate(m, t, whole(m), {});
    drive(inst, 5, 1000);
    EXPECT_TRUE(inst.trap() || inst.all_finished());
  }
  EXPECT_GT(ran, 100);
}

}  // namespace
}  // namespace flowrt::engine
