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

#include "flowrt/engine/instance.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include "flowrt/cft/host_registry.hpp"

namespace flowrt::engine {

std::string_view to_string(TrapKind k) {
  switch (k) {
    case TrapKind::oob_memory: return "oob_memory";
    case TrapKind::div_by_zero: return "div_by_zero";
    case TrapKind::unreachable: return "unreachable";
    case TrapKind::stack_exhausted: return "stack_exhausted";
    case TrapKind::bad_host_args: return "bad_host_args";
  }
  return "?";
}

std::string_view to_string(ThreadStatus s) {
  switch (s) {
    case ThreadStatus::runnable: return "runnable";
    case ThreadStatus::blocked_join: return "blocked_join";
    case ThreadStatus::finished: return "finished";
  }
  return "?";
}

std::string_view to_string(StepOutcome::State s) {
  switch (s) {
    case StepOutcome::State::yielded: return "yielded";
    case StepOutcome::State::blocked: return "blocked";
    case StepOutcome::State::finished: return "finished";
    case StepOutcome::State::trapped: return "trapped";
  }
  return "?";
}

InstantiationError::InstantiationError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}

namespace {

std::uint32_t pages_for(std::uint64_t bytes) {
  return static_cast<std::uint32_t>(bytes / runtime::kPlacementPageSize);
}

}  // namespace

Instance Instance::instantiate(const cft::Module& m, const topology::Topology& t, runtime::Placement placement,
                               HostEnv env, ExecOptions options) {
  using IE = InstantiationError;
  for (const auto& imp : m.imports) {
    const auto* h = cft::find_host_function(imp.module_name, imp.name);
    if (h == nullptr || h->type != imp.type) {
      throw IE(IE::Kind::import_not_satisfied, "import " + imp.module_name + "." + imp.name + " is not satisfied");
    }
  }
  if (m.memories.size() != 1) throw std::invalid_argument("instantiate: module must have one memory");

  Instance inst;
  inst.module_ = &m;
  inst.topology_ = &t;

  const std::size_t devices = t.devices().size();
  if (options.device_of_function.empty()) {
    std::optional<std::uint32_t> cpu;
    for (std::size_t d = 0; d < devices && !cpu; ++d) {
      if (t.device(d).schedulable() && t.device(d).device_class == DeviceClass::cpu) {
        cpu = static_cast<std::uint32_t>(d);
      }
    }
    if (!cpu) throw IE(IE::Kind::invalid_device, "topology has no schedulable cpu device");
    options.device_of_function.assign(m.function_count(), *cpu);
  }
  if (options.device_of_function.size() < m.function_count()) {
    throw IE(IE::Kind::invalid_device, "device assignment does not cover every function");
  }
  for (std::uint32_t d : options.device_of_function) {
    if (d >= devices || !t.device(d).schedulable()) {
      throw IE(IE::Kind::invalid_device, "function assigned to a device that cannot execute code");
    }
  }

  const std::uint64_t bytes = std::uint64_t{m.memory().min_pages} * cft::kWasmPageSize;
  const std::uint32_t needed = pages_for(bytes);
  if (placement.page_count() < needed) {
    throw IE(IE::Kind::placement_incomplete, "placement covers " + std::to_string(placement.page_count()) +
                                                 " of " + std::to_string(needed) + " pages");
  }
  std::vector<std::uint32_t> pages(placement.pages().begin(), placement.pages().begin() + needed);
  for (std::uint32_t r : pages) {
    if (r >= t.regions().size()) throw IE(IE::Kind::placement_incomplete, "placement names an unknown region");
  }
  inst.placement_ = runtime::Placement(std::move(pages));

  inst.options_ = std::move(options);
  inst.memory_.assign(bytes, 0);
  for (const auto& g : m.globals) {
    inst.globals_.push_back(g.type == cft::ValType::i32 ? static_cast<std::uint32_t>(g.init)
                                                        : static_cast<std::uint64_t>(g.init));
  }
  inst.host_ = HostState(std::move(env));
  inst.stats_.resize(needed, devices);

  inst.costs_.reserve(devices * t.regions().size());
  for (std::size_t d = 0; d < devices; ++d) {
    inst.compute_rate_.push_back(t.device(d).compute_ns_per_instr.value_or(0.0));
    for (std::size_t r = 0; r < t.regions().size(); ++r) inst.costs_.push_back(t.cost(d, r));
  }

  inst.compiled_.resize(m.functions.size());
  for (std::size_t i = 0; i < m.functions.size(); ++i) {
    const auto& f = m.functions[i];
    CompiledFunc& cf = inst.compiled_[i];
    cf.param_count = static_cast<std::uint32_t>(f.type.params.size());
    cf.local_count = static_cast<std::uint32_t>(f.type.params.size() + f.locals.size());
    cf.has_result = !f.type.results.empty();
    cf.match_end.assign(f.body.size(), 0);
    cf.match_else.assign(f.body.size(), 0);
    std::vector<std::uint32_t> open;
    for (std::uint32_t pc = 0; pc < f.body.size(); ++pc) {
      switch (f.body[pc].op) {
        case cft::Opcode::block:
        case cft::Opcode::loop:
        case cft::Opcode::if_:
          open.push_back(pc);
          break;
        case cft::Opcode::else_:
          if (open.empty()) throw std::invalid_argument("instantiate: unbalanced else");
          cf.match_else[open.back()] = pc;
          break;
        case cft::Opcode::end: {
          if (open.empty()) throw std::invalid_argument("instantiate: unbalanced end");
          const std::uint32_t start = open.back();
          open.pop_back();
          cf.match_end[start] = pc;
          if (f.body[start].op == cft::Opcode::if_) {
            if (cf.match_else[start] == 0) {
              cf.match_else[start] = pc;
            } else {
              cf.match_end[cf.match_else[start]] = pc;
            }
          }
          break;
        }
        default:
          break;
      }
    }
    if (!open.empty()) throw std::invalid_argument("instantiate: unbalanced block");
  }

  inst.threads_.reserve(inst.options_.max_threads);
  inst.spawn(0, m.entry, 0, false);
  return inst;
}

std::uint32_t Instance::device_for(std::uint32_t func) const { return options_.device_of_function[func]; }

bool Instance::all_finished() const {
  return std::all_of(threads_.begin(), threads_.end(),
                     [](const Thread& t) { return t.info.status == ThreadStatus::finished; });
}

bool Instance::any_runnable() const {
  return std::any_of(threads_.begin(), threads_.end(),
                     [](const Thread& t) { return t.info.status == ThreadStatus::runnable; });
}

void Instance::set_placement(runtime::Placement p) {
  if (p.page_count() != placement_.page_count()) {
    throw std::invalid_argument("set_placement: page count must match linear memory");
  }
  placement_ = std::move(p);
}

std::uint32_t Instance::spawn(std::uint32_t parent, std::uint32_t func, std::uint32_t arg, bool charge_parent) {
  const auto tid = static_cast<std::uint32_t>(threads_.size());
  Thread th;
  th.info.tid = tid;
  th.info.function = func;
  th.info.device = device_for(func);
  th.info.parent = parent;
  const double charge = options_.compile_charge ? options_.compile_charge(func, th.info.device) : 0.0;
  if (charge_parent) {
    ThreadInfo& p = threads_[parent].info;
    p.compile_ns += charge;
    p.clock_ns += charge;
    th.info.clock_ns = p.clock_ns;
  } else {
    th.info.compile_ns = charge;
    th.info.clock_ns = charge;
  }
  th.stack.push_back(arg);
  threads_.push_back(std::move(th));
  enter(threads_.back(), func);
  return tid;
}

bool Instance::enter(Thread& th, std::uint32_t func) {
  if (th.frames.size() >= options_.max_call_depth || th.stack.size() >= options_.max_value_stack) return false;
  const CompiledFunc& cf = compiled_[func - module_->imports.size()];
  Frame f;
  f.func = func;
  f.pc = 0;
  f.locals_base = static_cast<std::uint32_t>(th.locals.size());
  f.labels_base = static_cast<std::uint32_t>(th.labels.size());
  th.locals.resize(th.locals.size() + cf.local_count, 0);
  for (std::uint32_t i = cf.param_count; i > 0; --i) {
    th.locals[f.locals_base + i - 1] = th.stack.back();
    th.stack.pop_back();
  }
  f.stack_base = static_cast<std::uint32_t>(th.stack.size());
  th.frames.push_back(f);
  return true;
}

bool Instance::leave(Thread& th) {
  const Frame f = th.frames.back();
  const CompiledFunc& cf = compiled_[f.func - module_->imports.size()];
  std::uint64_t value = 0;
  if (cf.has_result) value = th.stack.back();
  th.stack.resize(f.stack_base);
  th.labels.resize(f.labels_base);
  th.locals.resize(f.locals_base);
  th.frames.pop_back();
  if (cf.has_result) th.stack.push_back(value);
  return th.frames.empty();
}

void Instance::finish_thread(std::uint32_t tid, std::optional<std::int32_t> result) {
  ThreadInfo& done = threads_[tid].info;
  done.status = ThreadStatus::finished;
  done.result = result;
  for (Thread& w : threads_) {
    if (w.info.status == ThreadStatus::blocked_join && w.info.join_target == tid) {
      w.stack.push_back(static_cast<std::uint32_t>(result.value_or(0)));
      w.info.clock_ns = std::max(w.info.clock_ns, done.clock_ns);
      w.info.status = ThreadStatus::runnable;
    }
  }
}

void Instance::flush(Thread& th, Pending& p) {
  const double compute = static_cast<double>(p.instructions) * compute_rate_[th.info.device];
  th.info.compute_ns += compute;
  th.info.memory_stall_ns += p.stall_ns;
  th.info.clock_ns += compute + p.stall_ns;
  th.info.instructions += p.instructions;
  p.outcome.compute_ns += compute;
  p.outcome.memory_stall_ns += p.stall_ns;
  p.instructions = 0;
  p.stall_ns = 0;
}

double Instance::charge_access(Thread& th, std::uint64_t addr, topology::AccessKind kind, std::uint32_t bytes) {
  const std::uint64_t page = addr / runtime::kPlacementPageSize;
  const std::uint32_t region = placement_.region_of(page);
  const std::uint32_t device = th.info.device;
  const double cost = topology::access_cost(costs_[device * topology_->regions().size() + region], kind, bytes);
  stats_.record(page, device);
  ++th.info.memory_ops;
  if (options_.on_access) options_.on_access({th.info.tid, device, region, page, kind, bytes, cost});
  return cost;
}

bool Instance::grow_memory(std::uint32_t delta_pages) {
  const std::uint64_t current = memory_pages();
  if (current + delta_pages > module_->memory().max_pages) return false;
  if (delta_pages == 0) return true;
  const std::uint64_t new_bytes = std::uint64_t{delta_pages} * cft::kWasmPageSize;
  const auto used = placement_.bytes_per_region(topology_->regions().size());
  auto fits = [&](std::uint32_t r) { return used[r] + new_bytes <= topology_->region(r).capacity_bytes; };
  std::optional<std::uint32_t> target;
  if (options_.grow_region && *options_.grow_region < used.size() && fits(*options_.grow_region)) {
    target = options_.grow_region;
  }
  for (std::uint32_t r = 0; !target && r < used.size(); ++r) {
    if (fits(r)) target = r;
  }
  if (!target) return false;
  memory_.resize(memory_.size() + new_bytes, 0);
  placement_.append(*target, pages_for(new_bytes));
  stats_.resize(placement_.page_count(), topology_->devices().size());
  return true;
}

bool Instance::host_call(std::uint32_t tid, Pending& p, cft::HostFn fn, bool& blocked, bool& exited) {
  Thread& th = threads_[tid];
  auto& st = th.stack;
  auto pop = [&]() {
    const auto v = static_cast<std::uint32_t>(st.back());
    st.pop_back();
    return v;
  };
  auto in_bounds = [&](std::uint64_t ptr, std::uint64_t len) { return ptr + len <= memory_.size(); };
  auto store_u32 = [&](std::uint32_t ptr, std::uint32_t v) { std::memcpy(memory_.data() + ptr, &v, 4); };
  auto push = [&](std::uint32_t v) { st.push_back(v); };

  switch (fn) {
    case cft::HostFn::fd_read:
    case cft::HostFn::fd_write: {
      const std::uint32_t out_ptr = pop();
      const std::uint32_t len = pop();
      const std::uint32_t ptr = pop();
      const auto fd = static_cast<std::int32_t>(pop());
      if (!in_bounds(ptr, len) || !in_bounds(out_ptr, 4)) return false;
      std::int64_t moved = 0;
      if (fn == cft::HostFn::fd_read) {
        moved = host_.read(fd, memory_.data() + ptr, len);
      } else if (fd < 0) {
        moved = -1;
      } else {
        host_.write(fd, memory_.data() + ptr, len);
        moved = len;
      }
      if (moved < 0) {
        push(static_cast<std::uint32_t>(-kErrnoBadf));
      } else {
        store_u32(out_ptr, static_cast<std::uint32_t>(moved));
        push(static_cast<std::uint32_t>(moved));
      }
      return true;
    }
    case cft::HostFn::sock_send: {
      const std::uint32_t len = pop();
      const std::uint32_t ptr = pop();
      if (!in_bounds(ptr, len)) return false;
      push(host_.sock_send(memory_.data() + ptr, len));
      return true;
    }
    case cft::HostFn::sock_recv: {
      const std::uint32_t len = pop();
      const std::uint32_t ptr = pop();
      if (!in_bounds(ptr, len)) return false;
      push(host_.sock_recv(memory_.data() + ptr, len));
      return true;
    }
    case cft::HostFn::clock_time_get: {
      const std::uint32_t ptr = pop();
      if (!in_bounds(ptr, 8)) return false;
      flush(th, p);
      const auto now = static_cast<std::uint64_t>(th.info.clock_ns);
      std::memcpy(memory_.data() + ptr, &now, 8);
      push(0);
      return true;
    }
    case cft::HostFn::proc_exit: {
      const auto code = static_cast<std::int32_t>(pop());
      flush(th, p);
      exit_code_ = code;
      for (Thread& t : threads_) t.info.status = ThreadStatus::finished;
      exited = true;
      return true;
    }
    case cft::HostFn::spawn: {
      const std::uint32_t arg = pop();
      const std::uint32_t index = pop();
      if (index >= module_->threads.size() || threads_.size() >= options_.max_threads) return false;
      flush(th, p);
      const double before = th.info.compile_ns;
      const std::uint32_t child = spawn(tid, module_->threads[index], arg, true);
      p.outcome.compile_ns += threads_[tid].info.compile_ns - before;
      push(child);
      return true;
    }
    case cft::HostFn::join: {
      const std::uint32_t target = pop();
      if (target >= threads_.size() || target == tid) return false;
      flush(th, p);
      const ThreadInfo& other = threads_[target].info;
      if (other.status == ThreadStatus::finished) {
        th.info.clock_ns = std::max(th.info.clock_ns, other.clock_ns);
        push(static_cast<std::uint32_t>(other.result.value_or(0)));
      } else {
        th.info.status = ThreadStatus::blocked_join;
        th.info.join_target = target;
        blocked = true;
      }
      return true;
    }
  }
  return false;
}

}  // namespace flowrt::engine
