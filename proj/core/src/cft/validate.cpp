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

#include "flowrt/cft/validate.hpp"

#include <algorithm>

namespace flowrt::cft {

bool ValidationReport::has_errors() const {
  return std::any_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.severity == Severity::error; });
}

std::size_t ValidationReport::count(std::string_view rule) const {
  return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(),
                                                [&](const Finding& f) { return f.rule == rule; }));
}

namespace {

inline constexpr std::uint32_t kMaxPages = 65536;

// Thrown inside the body checker to abandon a function after a typing error.
struct StopFunction {};

class BodyChecker {
 public:
  BodyChecker(const Module& m, std::uint32_t func, ValidationReport& report)
      : m_(m), func_(func), f_(m.defined(func)), report_(report) {
    locals_ = f_.type.params;
    locals_.insert(locals_.end(), f_.locals.begin(), f_.locals.end());
  }

  void run() {
    ctrls_.push_back({Opcode::block, result_of(f_.type), 0, false});
    try {
      for (pc_ = 0; pc_ < f_.body.size(); ++pc_) step(f_.body[pc_]);
      if (ctrls_.size() != 1) {
        error("UNBALANCED_BLOCK", "function body ends inside a block");
        return;
      }
      end_frame();
    } catch (const StopFunction&) {
    }
  }

 private:
  using Slot = std::optional<ValType>;  // nullopt: any type (unreachable code)

  struct Ctrl {
    Opcode op;
    std::optional<ValType> result;
    std::size_t height;
    bool unreachable;
  };

  static std::optional<ValType> result_of(const FuncType& t) {
    if (t.results.empty()) return std::nullopt;
    return t.results[0];
  }

  void finding(std::string rule, std::string message) {
    Finding f;
    f.rule = std::move(rule);
    f.severity = Severity::error;
    f.function = func_;
    if (pc_ < f_.body.size()) {
      f.instruction = static_cast<std::uint32_t>(pc_);
      f.loc = f_.body[pc_].loc;
    } else {
      f.loc = f_.loc;
    }
    f.message = m_.func_name(func_) + ": " + std::move(message);
    report_.findings.push_back(std::move(f));
  }

  // Index errors are reported and the rest of the block is skipped over.
  void soft_error(std::string rule, std::string message) {
    finding(std::move(rule), std::move(message));
    set_unreachable();
  }

  [[noreturn]] void error(std::string rule, std::string message) {
    finding(std::move(rule), std::move(message));
    throw StopFunction{};
  }

  void push(Slot t) { vals_.push_back(t); }

  Slot pop() {
    Ctrl& c = ctrls_.back();
    if (vals_.size() == c.height) {
      if (c.unreachable) return std::nullopt;
      const std::string_view at = pc_ < f_.body.size() ? to_string(f_.body[pc_].op) : "function end";
      error("STACK_UNDERFLOW", "operand stack underflow at " + std::string(at));
    }
    Slot t = vals_.back();
    vals_.pop_back();
    return t;
  }

  Slot pop(ValType expect) {
    Slot t = pop();
    if (t && *t != expect) {
      error("TYPE_MISMATCH", "expected " + std::string(to_string(expect)) + " operand, found " +
                                 std::string(to_string(*t)));
    }
    return expect;
  }

  void set_unreachable() {
    vals_.resize(ctrls_.back().height);
    ctrls_.back().unreachable = true;
  }

  std::optional<ValType> label_type(const Ctrl& c) const {
    return c.op == Opcode::loop ? std::nullopt : c.result;
  }

  // Checks the stack holds exactly the frame's result at end/else.
  void end_frame() {
    const Ctrl& c = ctrls_.back();
    if (c.result) pop(*c.result);
    if (vals_.size() != c.height) {
      error("TYPE_MISMATCH", "block leaves extra values on the stack");
    }
  }

  void binop(ValType t) {
    pop(t);
    pop(t);
    push(t);
  }

  void step(const Instruction& ins) {
    using O = Opcode;
    constexpr ValType I32 = ValType::i32;
    constexpr ValType I64 = ValType::i64;
    switch (ins.op) {
      case O::i32_const: push(I32); break;
      case O::i64_const: push(I64); break;
      case O::i32_add: case O::i32_sub: case O::i32_mul: case O::i32_div_u: case O::i32_rem_u:
      case O::i32_and: case O::i32_or: case O::i32_xor: case O::i32_shl: case O::i32_shr_u:
      case O::i32_eq: case O::i32_ne: case O::i32_lt_u: case O::i32_lt_s: case O::i32_gt_u:
      case O::i32_ge_u:
        binop(I32);
        break;
      case O::i64_add: case O::i64_sub: case O::i64_mul: case O::i64_div_u: case O::i64_rem_u:
      case O::i64_and: case O::i64_or: case O::i64_xor: case O::i64_shl: case O::i64_shr_u:
        binop(I64);
        break;
      case O::i32_eqz: pop(I32); push(I32); break;
      case O::i64_extend_i32_u: pop(I32); push(I64); break;
      case O::i32_wrap_i64: pop(I64); push(I32); break;
      case O::local_get:
      case O::local_set:
      case O::local_tee: {
        if (ins.index >= locals_.size()) {
          soft_error("BAD_LOCAL_INDEX", "local index " + std::to_string(ins.index) + " out of range");
          break;
        }
        const ValType t = locals_[ins.index];
        if (ins.op == O::local_get) {
          push(t);
        } else {
          pop(t);
          if (ins.op == O::local_tee) push(t);
        }
        break;
      }
      case O::global_get:
      case O::global_set: {
        if (ins.index >= m_.globals.size()) {
          soft_error("BAD_GLOBAL_INDEX", "global index " + std::to_string(ins.index) + " out of range");
          break;
        }
        const Global& g = m_.globals[ins.index];
        if (ins.op == O::global_get) {
          push(g.type);
        } else {
          if (!g.is_mutable) {
            soft_error("IMMUTABLE_GLOBAL", "global.set on immutable global " + std::to_string(ins.index));
            break;
          }
          pop(g.type);
        }
        break;
      }
      case O::i32_load: case O::i32_load8_u: case O::i32_atomic_load:
        pop(I32); push(I32); break;
      case O::i64_load:
        pop(I32); push(I64); break;
      case O::i32_store: case O::i32_store8: case O::i32_atomic_store:
        pop(I32); pop(I32); break;
      case O::i64_store:
        pop(I64); pop(I32); break;
      case O::i32_atomic_rmw_add:
        pop(I32); pop(I32); push(I32); break;
      case O::i32_atomic_rmw_cmpxchg:
        pop(I32); pop(I32); pop(I32); push(I32); break;
      case O::memory_size: push(I32); break;
      case O::memory_grow: pop(I32); push(I32); break;
      case O::block:
      case O::loop:
        ctrls_.push_back({ins.op, ins.block_result, vals_.size(), false});
        break;
      case O::if_:
        pop(I32);
        ctrls_.push_back({ins.op, ins.block_result, vals_.size(), false});
        break;
      case O::else_: {
        if (ctrls_.size() < 2 || ctrls_.back().op != O::if_) error("UNBALANCED_BLOCK", "else without if");
        end_frame();
        Ctrl& c = ctrls_.back();
        c.op = O::else_;
        c.unreachable = false;
        break;
      }
      case O::end: {
        if (ctrls_.size() < 2) error("UNBALANCED_BLOCK", "end without block");
        end_frame();
        const Ctrl c = ctrls_.back();
        if (c.op == O::if_ && c.result) error("TYPE_MISMATCH", "if with a result requires an else branch");
        ctrls_.pop_back();
        if (c.result) push(*c.result);
        break;
      }
      case O::br:
      case O::br_if: {
        if (ins.index >= ctrls_.size()) {
          soft_error("BAD_BRANCH_DEPTH", "branch depth " + std::to_string(ins.index) +
                                             " exceeds nesting " + std::to_string(ctrls_.size() - 1));
          break;
        }
        if (ins.op == O::br_if) pop(I32);
        const auto t = label_type(ctrls_[ctrls_.size() - 1 - ins.index]);
        if (t) pop(*t);
        if (ins.op == O::br) {
          set_unreachable();
        } else if (t) {
          push(*t);
        }
        break;
      }
      case O::return_:
        if (auto r = result_of(f_.type)) pop(*r);
        set_unreachable();
        break;
      case O::call: {
        if (ins.index >= m_.function_count()) {
          soft_error("UNRESOLVED_CALL", "call to undefined function index " + std::to_string(ins.index));
          break;
        }
        const FuncType& t = m_.func_type(ins.index);
        for (auto it = t.params.rbegin(); it != t.params.rend(); ++it) pop(*it);
        for (ValType r : t.results) push(r);
        if (m_.is_import(ins.index) && m_.imports[ins.index].host == HostFn::proc_exit) set_unreachable();
        break;
      }
      case O::drop: pop(); break;
      case O::select: {
        pop(I32);
        Slot a = pop();
        Slot b = pop();
        if (a && b && *a != *b) error("TYPE_MISMATCH", "select operands differ in type");
        push(a ? a : b);
        break;
      }
      case O::nop: break;
      case O::unreachable: set_unreachable(); break;
    }
  }

  const Module& m_;
  std::uint32_t func_;
  const FuncDef& f_;
  ValidationReport& report_;
  std::vector<ValType> locals_;
  std::vector<Slot> vals_;
  std::vector<Ctrl> ctrls_;
  std::size_t pc_ = 0;
};

bool is_thread_signature(const FuncType& t) {
  return t.params == std::vector<ValType>{ValType::i32} && t.results == std::vector<ValType>{ValType::i32};
}

void module_finding(ValidationReport& r, std::string rule, Severity sev, SourceLoc loc, std::string msg,
                    std::optional<std::uint32_t> func = std::nullopt) {
  Finding f;
  f.rule = std::move(rule);
  f.severity = sev;
  f.function = func;
  f.loc = loc;
  f.message = std::move(msg);
  r.findings.push_back(std::move(f));
}

}  // namespace

ValidationReport validate_module(const Module& m) {
  ValidationReport r;
  if (m.memories.size() != 1) {
    module_finding(r, "MEMORY_COUNT", Severity::error, {}, "exactly one memory is required");
  } else {
    const MemoryDecl& mem = m.memory();
    if (!mem.shared) module_finding(r, "MEMORY_NOT_SHARED", Severity::error, mem.loc, "memory must be shared");
    if (mem.min_pages < 1 || mem.max_pages < mem.min_pages || mem.max_pages > kMaxPages) {
      module_finding(r, "MEMORY_LIMITS", Severity::error, mem.loc,
                     "memory limits need 1 <= min <= max <= 65536");
    }
  }

  for (const auto& e : m.exports) {
    if (e.func >= m.function_count()) {
      module_finding(r, "UNRESOLVED_EXPORT", Severity::error, {},
                     "export \"" + e.name + "\" names undefined function " + std::to_string(e.func));
    }
  }
  if (m.entry >= m.function_count() || m.is_import(m.entry) ||
      !is_thread_signature(m.func_type(m.entry))) {
    module_finding(r, "MAIN_SIGNATURE", Severity::error, {},
                   "\"main\" must be a defined function with (param i32) (result i32)");
  }

  for (std::uint32_t t : m.threads) {
    if (t >= m.function_count() || m.is_import(t)) {
      module_finding(r, "THREAD_NOT_DEFINED", Severity::error, {},
                     "thread table entry " + m.func_name(t) + " is not a defined function");
    } else if (!is_thread_signature(m.func_type(t))) {
      module_finding(r, "THREAD_SIGNATURE", Severity::error, m.defined(t).loc,
                     "thread function " + m.func_name(t) + " must have (param i32) (result i32)", t);
    }
  }

  for (std::size_t i = 0; i < m.functions.size(); ++i) {
    const auto f = static_cast<std::uint32_t>(m.imports.size() + i);
    BodyChecker(m, f, r).run();
    const FuncDef& def = m.functions[i];
    const bool spawnable =
        f == m.entry || std::find(m.threads.begin(), m.threads.end(), f) != m.threads.end();
    if (def.hint && !spawnable) {
      module_finding(r, "HINT_NOT_SPAWNABLE", Severity::warning, def.loc,
                     m.func_name(f) + " carries a thread annotation but is neither main nor in the thread table", f);
    }
  }
  return r;
}

}  // namespace flowrt::cft
