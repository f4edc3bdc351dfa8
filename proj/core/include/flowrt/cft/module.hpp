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
#include <string_view>
#include <vector>

#include "flowrt/cft/host_registry.hpp"
#include "flowrt/cft/opcode.hpp"
#include "flowrt/device_class.hpp"

namespace flowrt::cft {

inline constexpr std::uint64_t kWasmPageSize = 65536;

struct SourceLoc {
  std::uint32_t line = 0;
  std::uint32_t col = 0;
};

struct AffinityHint {
  DeviceClass device_class = DeviceClass::cpu;
  friend bool operator==(const AffinityHint&, const AffinityHint&) = default;
};

// Source locations are carried for diagnostics only and never take part in
// structural equality.
struct Instruction {
  Opcode op = Opcode::nop;
  std::int64_t value = 0;   // i32.const (sign-extended) / i64.const
  std::uint32_t index = 0;  // local, global, function, depth or memory offset
  std::optional<ValType> block_result;
  SourceLoc loc;

  friend bool operator==(const Instruction& a, const Instruction& b) {
    return a.op == b.op && a.value == b.value && a.index == b.index &&
           a.block_result == b.block_result;
  }
};

struct MemoryDecl {
  bool shared = false;
  std::uint32_t min_pages = 0;
  std::uint32_t max_pages = 0;
  SourceLoc loc;

  friend bool operator==(const MemoryDecl& a, const MemoryDecl& b) {
    return a.shared == b.shared && a.min_pages == b.min_pages &&
           a.max_pages == b.max_pages;
  }
};

struct Import {
  std::string module_name;  // namespace, e.g. "wasi"
  std::string name;
  std::string id;           // optional $identifier, without the '$'
  FuncType type;
  HostFn host = HostFn::fd_read;
  SourceLoc loc;

  friend bool operator==(const Import& a, const Import& b) {
    return a.module_name == b.module_name && a.name == b.name && a.id == b.id &&
           a.type == b.type && a.host == b.host;
  }
};

struct Global {
  std::string id;
  ValType type = ValType::i32;
  bool is_mutable = false;
  std::int64_t init = 0;
  SourceLoc loc;

  friend bool operator==(const Global& a, const Global& b) {
    return a.id == b.id && a.type == b.type && a.is_mutable == b.is_mutable &&
           a.init == b.init;
  }
};

struct FuncDef {
  std::string id;
  FuncType type;
  std::vector<ValType> locals;           // declared locals, excluding params
  std::vector<std::string> local_names;  // params then locals; "" if unnamed
  std::vector<Instruction> body;         // the implicit final end is not stored
  std::optional<AffinityHint> hint;
  SourceLoc loc;

  friend bool operator==(const FuncDef& a, const FuncDef& b) {
    return a.id == b.id && a.type == b.type && a.locals == b.locals &&
           a.local_names == b.local_names && a.body == b.body && a.hint == b.hint;
  }
};

struct Export {
  std::string name;
  std::uint32_t func = 0;
  friend bool operator==(const Export&, const Export&) = default;
};

// Parsed program. Function indices are shared by imports and definitions:
// imports come first, in declaration order, followed by defined functions.
struct Module {
  std::vector<MemoryDecl> memories;
  std::vector<Import> imports;
  std::vector<Global> globals;
  std::vector<FuncDef> functions;
  std::vector<std::uint32_t> threads;  // spawnable function indices
  std::vector<Export> exports;
  std::uint32_t entry = 0;             // function exported as "main"

  std::size_t function_count() const { return imports.size() + functions.size(); }
  bool is_import(std::uint32_t f) const { return f < imports.size(); }
  const FuncDef& defined(std::uint32_t f) const { return functions.at(f - imports.size()); }
  const FuncType& func_type(std::uint32_t f) const;
  // "$id" when named, otherwise the numeric index.
  std::string func_name(std::uint32_t f) const;
  const MemoryDecl& memory() const { return memories.at(0); }

  friend bool operator==(const Module&, const Module&) = default;
};

}  // namespace flowrt::cft
