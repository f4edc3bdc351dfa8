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

#include <bit>
#include <cstring>

#include "flowrt/cft/host_registry.hpp"
#include "flowrt/engine/instance.hpp"

namespace flowrt::engine {

static_assert(std::endian::native == std::endian::little, "linear memory is accessed with native loads");

namespace {

template <typename T>
T load_le(const std::uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

template <typename T>
void store_le(std::uint8_t* p, T v) {
  std::memcpy(p, &v, sizeof v);
}

}  // namespace

StepOutcome Instance::step_thread(std::uint32_t tid, std::uint64_t quantum) {
  using cft::Opcode;
  using topology::AccessKind;

  StepOutcome out;
  if (trap_) {
    out.state = StepOutcome::State::trapped;
    out.trap = trap_;
    return out;
  }
  Thread& th = threads_.at(tid);
  if (th.info.status == ThreadStatus::finished) {
    out.state = StepOutcome::State::finished;
    return out;
  }
  if (th.info.status == ThreadStatus::blocked_join) {
    out.state = StepOutcome::State::blocked;
    return out;
  }

  Pending p;
  auto& st = th.stack;
  const std::size_t import_count = module_->imports.size();

  Frame* fr = nullptr;
  const cft::Instruction* code = nullptr;
  std::uint32_t code_len = 0;
  const CompiledFunc* cf = nullptr;
  auto reload = [&] {
    fr = &th.frames.back();
    const auto& f = module_->functions[fr->func - import_count];
    code = f.body.data();
    code_len = static_cast<std::uint32_t>(f.body.size());
    cf = &compiled_[fr->func - import_count];
  };

  auto pop = [&]() {
    const std::uint64_t v = st.back();
    st.pop_back();
    return v;
  };
  auto pop32 = [&]() { return static_cast<std::uint32_t>(pop()); };
  auto push32 = [&](std::uint32_t v) { st.push_back(v); };

  std::optional<TrapKind> trapped;
  bool finished = false;
  bool blocked = false;

  // Returns from the current frame; true when the thread has no frames left.
  auto do_return = [&]() {
    const bool has = cf->has_result;
    if (leave(th)) {
      std::optional<std::int32_t> result;
      if (has) result = static_cast<std::int32_t>(static_cast<std::uint32_t>(st.back()));
      flush(th, p);
      finish_thread(tid, result);
      finished = true;
      return true;
    }
    reload();
    return false;
  };

  auto branch = [&](std::uint32_t depth) {
    const std::size_t active = th.labels.size() - fr->labels_base;
    if (depth >= active) {
      do_return();
      return;
    }
    const Label l = th.labels[th.labels.size() - 1 - depth];
    if (l.has_value && !l.is_loop) {
      const std::uint64_t v = st.back();
      st.resize(l.height);
      st.push_back(v);
    } else {
      st.resize(l.height);
    }
    th.labels.resize(th.labels.size() - depth - (l.is_loop ? 0 : 1));
    fr->pc = l.cont_pc;
  };

  // Bounds-checks and charges one memory access; returns the host pointer.
  auto access = [&](std::uint32_t addr, std::uint32_t offset, std::uint32_t width,
                    AccessKind kind) -> std::uint8_t* {
    const std::uint64_t ea = std::uint64_t{addr} + offset;
    if (ea + width > memory_.size()) {
      trapped = TrapKind::oob_memory;
      return nullptr;
    }
    p.stall_ns += charge_access(th, ea, kind, width);
    return memory_.data() + ea;
  };

  reload();
  std::uint64_t executed = 0;
  for (;;) {
    if (blocked) break;
    while (!finished && fr->pc >= code_len) do_return();
    if (finished || executed >= quantum) break;

    const cft::Instruction& ins = code[fr->pc];
    ++executed;
    ++p.instructions;
    std::uint32_t next = fr->pc + 1;

    switch (ins.op) {
      case Opcode::i32_const: push32(static_cast<std::uint32_t>(ins.value)); break;
      case Opcode::i64_const: st.push_back(static_cast<std::uint64_t>(ins.value)); break;

#define FLOWRT_BIN32(OP, EXPR)     \
  case Opcode::OP: {               \
    const std::uint32_t b = pop32(); \
    const std::uint32_t a = pop32(); \
    push32(EXPR);                  \
    break;                         \
  }
#define FLOWRT_BIN64(OP, EXPR)     \
  case Opcode::OP: {               \
    const std::uint64_t b = pop(); \
    const std::uint64_t a = pop(); \
    st.push_back(EXPR);            \
    break;                         \
  }
      FLOWRT_BIN32(i32_add, a + b)
      FLOWRT_BIN32(i32_sub, a - b)
      FLOWRT_BIN32(i32_mul, a * b)
      FLOWRT_BIN32(i32_and, a & b)
      FLOWRT_BIN32(i32_or, a | b)
      FLOWRT_BIN32(i32_xor, a ^ b)
      FLOWRT_BIN32(i32_shl, a << (b & 31U))
      FLOWRT_BIN32(i32_shr_u, a >> (b & 31U))
      FLOWRT_BIN32(i32_eq, a == b ? 1U : 0U)
      FLOWRT_BIN32(i32_ne, a != b ? 1U : 0U)
      FLOWRT_BIN32(i32_lt_u, a < b ? 1U : 0U)
      FLOWRT_BIN32(i32_lt_s, static_cast<std::int32_t>(a) < static_cast<std::int32_t>(b) ? 1U : 0U)
      FLOWRT_BIN32(i32_gt_u, a > b ? 1U : 0U)
      FLOWRT_BIN32(i32_ge_u, a >= b ? 1U : 0U)
      FLOWRT_BIN64(i64_add, a + b)
      FLOWRT_BIN64(i64_sub, a - b)
      FLOWRT_BIN64(i64_mul, a * b)
      FLOWRT_BIN64(i64_and, a & b)
      FLOWRT_BIN64(i64_or, a | b)
      FLOWRT_BIN64(i64_xor, a ^ b)
      FLOWRT_BIN64(i64_shl, a << (b & 63U))
      FLOWRT_BIN64(i64_shr_u, a >> (b & 63U))
#undef FLOWRT_BIN32
#undef FLOWRT_BIN64

      case Opcode::i32_div_u:
      case Opcode::i32_rem_u: {
        const std::uint32_t b = pop32();
        const std::uint32_t a = pop32();
        if (b == 0) {
          trapped = TrapKind::div_by_zero;
          break;
        }
        push32(ins.op == Opcode::i32_div_u ? a / b : a % b);
        break;
      }
      case Opcode::i64_div_u:
      case Opcode::i64_rem_u: {
        const std::uint64_t b = pop();
        const std::uint64_t a = pop();
        if (b == 0) {
          trapped = TrapKind::div_by_zero;
          break;
        }
        st.push_back(ins.op == Opcode::i64_div_u ? a / b : a % b);
        break;
      }
      case Opcode::i32_eqz: push32(pop32() == 0 ? 1U : 0U); break;
      case Opcode::i64_extend_i32_u: st.push_back(pop32()); break;
      case Opcode::i32_wrap_i64: push32(static_cast<std::uint32_t>(pop())); break;

      case Opcode::local_get: st.push_back(th.locals[fr->locals_base + ins.index]); break;
      case Opcode::local_set: th.locals[fr->locals_base + ins.index] = pop(); break;
      case Opcode::local_tee: th.locals[fr->locals_base + ins.index] = st.back(); break;
      case Opcode::global_get: st.push_back(globals_[ins.index]); break;
      case Opcode::global_set: globals_[ins.index] = pop(); break;

      case Opcode::i32_load:
      case Opcode::i32_atomic_load: {
        const std::uint8_t* m = access(pop32(), ins.index, 4, AccessKind::read);
        if (m != nullptr) push32(load_le<std::uint32_t>(m));
        break;
      }
      case Opcode::i64_load: {
        const std::uint8_t* m = access(pop32(), ins.index, 8, AccessKind::read);
        if (m != nullptr) st.push_back(load_le<std::uint64_t>(m));
        break;
      }
      case Opcode::i32_load8_u: {
        const std::uint8_t* m = access(pop32(), ins.index, 1, AccessKind::read);
        if (m != nullptr) push32(*m);
        break;
      }
      case Opcode::i32_store:
      case Opcode::i32_atomic_store: {
        const std::uint32_t v = pop32();
        std::uint8_t* m = access(pop32(), ins.index, 4, AccessKind::write);
        if (m != nullptr) store_le(m, v);
        break;
      }
      case Opcode::i64_store: {
        const std::uint64_t v = pop();
        std::uint8_t* m = access(pop32(), ins.index, 8, AccessKind::write);
        if (m != nullptr) store_le(m, v);
        break;
      }
      case Opcode::i32_store8: {
        const std::uint32_t v = pop32();
        std::uint8_t* m = access(pop32(), ins.index, 1, AccessKind::write);
        if (m != nullptr) *m = static_cast<std::uint8_t>(v);
        break;
      }
      case Opcode::i32_atomic_rmw_add: {
        const std::uint32_t v = pop32();
        std::uint8_t* m = access(pop32(), ins.index, 4, AccessKind::write);
        if (m == nullptr) break;
        const auto old = load_le<std::uint32_t>(m);
        store_le<std::uint32_t>(m, old + v);
        push32(old);
        break;
      }
      case Opcode::i32_atomic_rmw_cmpxchg: {
        const std::uint32_t replacement = pop32();
        const std::uint32_t expected = pop32();
        std::uint8_t* m = access(pop32(), ins.index, 4, AccessKind::write);
        if (m == nullptr) break;
        const auto old = load_le<std::uint32_t>(m);
        if (old == expected) store_le(m, replacement);
        push32(old);
        break;
      }
      case Opcode::memory_size: push32(memory_pages()); break;
      case Opcode::memory_grow: {
        const std::uint32_t delta = pop32();
        const std::uint32_t old = memory_pages();
        push32(grow_memory(delta) ? old : 0xFFFFFFFFU);
        break;
      }

      case Opcode::block:
        th.labels.push_back({cf->match_end[fr->pc] + 1, static_cast<std::uint32_t>(st.size()),
                             ins.block_result.has_value(), false});
        break;
      case Opcode::loop:
        th.labels.push_back({fr->pc + 1, static_cast<std::uint32_t>(st.size()), false, true});
        break;
      case Opcode::if_: {
        const std::uint32_t c = pop32();
        const std::uint32_t end = cf->match_end[fr->pc];
        th.labels.push_back({end + 1, static_cast<std::uint32_t>(st.size()), ins.block_result.has_value(), false});
        if (c == 0) {
          const std::uint32_t e = cf->match_else[fr->pc];
          next = e == end ? end : e + 1;
        }
        break;
      }
      case Opcode::else_: next = cf->match_end[fr->pc]; break;
      case Opcode::end: th.labels.pop_back(); break;
      case Opcode::br:
        branch(ins.index);
        continue;
      case Opcode::br_if:
        if (pop32() != 0) {
          branch(ins.index);
          continue;
        }
        break;
      case Opcode::return_:
        do_return();
        continue;

      case Opcode::call: {
        const std::uint32_t callee = ins.index;
        if (callee < import_count) {
          fr->pc = next;
          bool exited = false;
          if (!host_call(tid, p, module_->imports[callee].host, blocked, exited)) {
            trapped = TrapKind::bad_host_args;
            break;
          }
          if (exited) finished = true;
          reload();
          continue;
        }
        fr->pc = next;
        if (!enter(th, callee)) {
          trapped = TrapKind::stack_exhausted;
          break;
        }
        reload();
        continue;
      }
      case Opcode::drop: st.pop_back(); break;
      case Opcode::select: {
        const std::uint32_t c = pop32();
        const std::uint64_t b = pop();
        const std::uint64_t a = pop();
        st.push_back(c != 0 ? a : b);
        break;
      }
      case Opcode::nop: break;
      case Opcode::unreachable: trapped = TrapKind::unreachable; break;
    }

    if (trapped) break;
    fr->pc = next;
    if (st.size() > options_.max_value_stack) {
      trapped = TrapKind::stack_exhausted;
      break;
    }
  }

  flush(th, p);
  out.executed = executed;
  out.cost = p.outcome;
  if (trapped) {
    trap_ = trapped;
    trap_thread_ = tid;
    out.trap = trapped;
    out.state = StepOutcome::State::trapped;
  } else if (th.info.status == ThreadStatus::finished) {
    out.state = StepOutcome::State::finished;
  } else if (th.info.status == ThreadStatus::blocked_join) {
    out.state = StepOutcome::State::blocked;
  } else {
    out.state = StepOutcome::State::yielded;
  }
  return out;
}

}  // namespace flowrt::engine
