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
#include <string_view>

namespace flowrt::cft {

enum class ValType : std::uint8_t { i32, i64 };

std::string_view to_string(ValType t);
std::optional<ValType> parse_val_type(std::string_view s);

// Coarse grouping used by static profiling.
enum class OpClass : std::uint8_t {
  constant,
  arith,     // integer arithmetic, bitwise and compare
  convert,   // i64.extend_i32_u / i32.wrap_i64
  variable,  // local.* / global.*
  load,
  store,
  atomic,
  memory,    // memory.size / memory.grow
  control,
  call,
  parametric,  // drop / select
};

// Immediate shape, which drives both parsing and printing.
enum class Imm : std::uint8_t {
  none,
  i32_value,
  i64_value,
  local_index,
  global_index,
  func_index,
  label_depth,
  mem_offset,
  block_type,
};

#define FLOWRT_OPCODES(X)                                          \
  X(i32_const, "i32.const", constant, i32_value)                   \
  X(i64_const, "i64.const", constant, i64_value)                   \
  X(i32_add, "i32.add", arith, none)                               \
  X(i32_sub, "i32.sub", arith, none)                               \
  X(i32_mul, "i32.mul", arith, none)                               \
  X(i32_div_u, "i32.div_u", arith, none)                           \
  X(i32_rem_u, "i32.rem_u", arith, none)                           \
  X(i32_and, "i32.and", arith, none)                               \
  X(i32_or, "i32.or", arith, none)                                 \
  X(i32_xor, "i32.xor", arith, none)                               \
  X(i32_shl, "i32.shl", arith, none)                               \
  X(i32_shr_u, "i32.shr_u", arith, none)                           \
  X(i64_add, "i64.add", arith, none)                               \
  X(i64_sub, "i64.sub", arith, none)                               \
  X(i64_mul, "i64.mul", arith, none)                               \
  X(i64_div_u, "i64.div_u", arith, none)                           \
  X(i64_rem_u, "i64.rem_u", arith, none)                           \
  X(i64_and, "i64.and", arith, none)                               \
  X(i64_or, "i64.or", arith, none)                                 \
  X(i64_xor, "i64.xor", arith, none)                               \
  X(i64_shl, "i64.shl", arith, none)                               \
  X(i64_shr_u, "i64.shr_u", arith, none)                           \
  X(i32_eqz, "i32.eqz", arith, none)                               \
  X(i32_eq, "i32.eq", arith, none)                                 \
  X(i32_ne, "i32.ne", arith, none)                                 \
  X(i32_lt_u, "i32.lt_u", arith, none)                             \
  X(i32_lt_s, "i32.lt_s", arith, none)                             \
  X(i32_gt_u, "i32.gt_u", arith, none)                             \
  X(i32_ge_u, "i32.ge_u", arith, none)                             \
  X(i64_extend_i32_u, "i64.extend_i32_u", convert, none)           \
  X(i32_wrap_i64, "i32.wrap_i64", convert, none)                   \
  X(local_get, "local.get", variable, local_index)                 \
  X(local_set, "local.set", variable, local_index)                 \
  X(local_tee, "local.tee", variable, local_index)                 \
  X(global_get, "global.get", variable, global_index)              \
  X(global_set, "global.set", variable, global_index)              \
  X(i32_load, "i32.load", load, mem_offset)                        \
  X(i64_load, "i64.load", load, mem_offset)                        \
  X(i32_load8_u, "i32.load8_u", load, mem_offset)                  \
  X(i32_store, "i32.store", store, mem_offset)                     \
  X(i64_store, "i64.store", store, mem_offset)                     \
  X(i32_store8, "i32.store8", store, mem_offset)                   \
  X(i32_atomic_load, "i32.atomic.load", atomic, mem_offset)        \
  X(i32_atomic_store, "i32.atomic.store", atomic, mem_offset)      \
  X(i32_atomic_rmw_add, "i32.atomic.rmw.add", atomic, mem_offset)  \
  X(i32_atomic_rmw_cmpxchg, "i32.atomic.rmw.cmpxchg", atomic, mem_offset) \
  X(memory_size, "memory.size", memory, none)                      \
  X(memory_grow, "memory.grow", memory, none)                      \
  X(block, "block", control, block_type)                           \
  X(loop, "loop", control, block_type)                             \
  X(if_, "if", control, block_type)                                \
  X(else_, "else", control, none)                                  \
  X(end, "end", control, none)                                     \
  X(br, "br", control, label_depth)                                \
  X(br_if, "br_if", control, label_depth)                          \
  X(return_, "return", control, none)                              \
  X(call, "call", call, func_index)                                \
  X(drop, "drop", parametric, none)                                \
  X(select, "select", parametric, none)                            \
  X(nop, "nop", control, none)                                     \
  X(unreachable, "unreachable", control, none)

enum class Opcode : std::uint8_t {
#define FLOWRT_OPCODE_ENUM(id, text, cls, imm) id,
  FLOWRT_OPCODES(FLOWRT_OPCODE_ENUM)
#undef FLOWRT_OPCODE_ENUM
};

inline constexpr std::size_t kOpcodeCount = 0
#define FLOWRT_OPCODE_COUNT(id, text, cls, imm) +1
    FLOWRT_OPCODES(FLOWRT_OPCODE_COUNT)
#undef FLOWRT_OPCODE_COUNT
    ;

struct OpcodeInfo {
  Opcode op;
  std::string_view text;
  OpClass cls;
  Imm imm;
};

const OpcodeInfo& info(Opcode op);
std::string_view to_string(Opcode op);
std::optional<Opcode> lookup_opcode(std::string_view text);

/// Access width in bytes for loads, stores and atomics; 0 otherwise.
unsigned access_width(Opcode op);

}  // namespace flowrt::cft
