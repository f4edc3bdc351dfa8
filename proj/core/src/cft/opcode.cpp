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

#include "flowrt/cft/opcode.hpp"

#include <array>
#include <unordered_map>

namespace flowrt::cft {
namespace {

constexpr std::array<OpcodeInfo, kOpcodeCount> kInfo = {{
#define FLOWRT_OPCODE_INFO(id, text, cls, imm) {Opcode::id, text, OpClass::cls, Imm::imm},
    FLOWRT_OPCODES(FLOWRT_OPCODE_INFO)
#undef FLOWRT_OPCODE_INFO
}};

const std::unordered_map<std::string_view, Opcode>& by_name() {
  static const auto table = [] {
    std::unordered_map<std::string_view, Opcode> m;
    for (const auto& i : kInfo) m.emplace(i.text, i.op);
    return m;
  }();
  return table;
}

}  // namespace

std::string_view to_string(ValType t) { return t == ValType::i32 ? "i32" : "i64"; }

std::optional<ValType> parse_val_type(std::string_view s) {
  if (s == "i32") return ValType::i32;
  if (s == "i64") return ValType::i64;
  return std::nullopt;
}

const OpcodeInfo& info(Opcode op) { return kInfo[static_cast<std::size_t>(op)]; }

std::string_view to_string(Opcode op) { return info(op).text; }

std::optional<Opcode> lookup_opcode(std::string_view text) {
  const auto& m = by_name();
  if (auto it = m.find(text); it != m.end()) return it->second;
  return std::nullopt;
}

unsigned access_width(Opcode op) {
  switch (op) {
    case Opcode::i32_load8_u:
    case Opcode::i32_store8:
      return 1;
    case Opcode::i32_load:
    case Opcode::i32_store:
    case Opcode::i32_atomic_load:
    case Opcode::i32_atomic_store:
    case Opcode::i32_atomic_rmw_add:
    case Opcode::i32_atomic_rmw_cmpxchg:
      return 4;
    case Opcode::i64_load:
    case Opcode::i64_store:
      return 8;
    default:
      return 0;
  }
}

}  // namespace flowrt::cft
