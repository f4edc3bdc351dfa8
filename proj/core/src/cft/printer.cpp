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

#include "flowrt/cft/printer.hpp"

#include <cstdio>
#include <sstream>

namespace flowrt::cft {
namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (u < 0x20 || u == 0x7f) {
      char buf[4];
      std::snprintf(buf, sizeof buf, "\\%02x", u);
      out += buf;
    } else {
      out += c;
    }
  }
  return out + "\"";
}

void print_types(std::ostream& os, const char* kw, const std::vector<ValType>& types,
                 const std::vector<std::string>& names, std::size_t name_base) {
  if (types.empty()) return;
  if (names.empty()) {
    os << " (" << kw;
    for (ValType t : types) os << ' ' << to_string(t);
    os << ')';
    return;
  }
  for (std::size_t i = 0; i < types.size(); ++i) {
    os << " (" << kw;
    if (const auto& n = names[name_base + i]; !n.empty()) os << " $" << n;
    os << ' ' << to_string(types[i]) << ')';
  }
}

std::string global_ref(const Module& m, std::uint32_t g) {
  if (g < m.globals.size() && !m.globals[g].id.empty()) return "$" + m.globals[g].id;
  return std::to_string(g);
}

void print_instruction(std::ostream& os, const Module& m, const Instruction& ins) {
  const OpcodeInfo& oi = info(ins.op);
  os << oi.text;
  switch (oi.imm) {
    case Imm::none:
      break;
    case Imm::i32_value:
    case Imm::i64_value:
      os << ' ' << ins.value;
      break;
    case Imm::local_index:
    case Imm::label_depth:
      os << ' ' << ins.index;
      break;
    case Imm::global_index:
      os << ' ' << global_ref(m, ins.index);
      break;
    case Imm::func_index:
      os << ' ' << m.func_name(ins.index);
      break;
    case Imm::mem_offset:
      if (ins.index != 0) os << " offset=" << ins.index;
      break;
    case Imm::block_type:
      if (ins.block_result) os << " (result " << to_string(*ins.block_result) << ')';
      break;
  }
}

void print_func(std::ostream& os, const Module& m, const FuncDef& f) {
  os << "  (func";
  if (!f.id.empty()) os << " $" << f.id;
  if (f.hint) os << " (thread " << to_string(f.hint->device_class) << ')';
  print_types(os, "param", f.type.params, f.local_names, 0);
  if (!f.type.results.empty()) os << " (result " << to_string(f.type.results[0]) << ')';
  os << '\n';
  if (!f.locals.empty()) {
    os << "   ";
    print_types(os, "local", f.locals, f.local_names, f.type.params.size());
    os << '\n';
  }
  int depth = 2;
  for (const Instruction& ins : f.body) {
    if (ins.op == Opcode::end || ins.op == Opcode::else_) depth = std::max(2, depth - 1);
    os << std::string(static_cast<std::size_t>(depth) * 2, ' ');
    print_instruction(os, m, ins);
    os << '\n';
    if (ins.op == Opcode::block || ins.op == Opcode::loop || ins.op == Opcode::if_ ||
        ins.op == Opcode::else_) {
      ++depth;
    }
  }
  os << "  )\n";
}

}  // namespace

std::string print_module(const Module& m) {
  std::ostringstream os;
  os << "(module\n";
  for (const auto& mem : m.memories) {
    os << "  (memory";
    if (mem.shared) os << " shared";
    os << ' ' << mem.min_pages << ' ' << mem.max_pages << ")\n";
  }
  for (const auto& imp : m.imports) {
    os << "  (import " << quote(imp.module_name) << ' ' << quote(imp.name) << " (func";
    if (!imp.id.empty()) os << " $" << imp.id;
    print_types(os, "param", imp.type.params, {}, 0);
    if (!imp.type.results.empty()) os << " (result " << to_string(imp.type.results[0]) << ')';
    os << "))\n";
  }
  for (const auto& g : m.globals) {
    os << "  (global";
    if (!g.id.empty()) os << " $" << g.id;
    if (g.is_mutable) {
      os << " (mut " << to_string(g.type) << ')';
    } else {
      os << ' ' << to_string(g.type);
    }
    os << " (" << to_string(g.type) << ".const " << g.init << "))\n";
  }
  for (const auto& f : m.functions) print_func(os, m, f);
  if (!m.threads.empty()) {
    os << "  (threads";
    for (std::uint32_t t : m.threads) os << ' ' << m.func_name(t);
    os << ")\n";
  }
  for (const auto& e : m.exports) {
    os << "  (export " << quote(e.name) << " (func " << m.func_name(e.func) << "))\n";
  }
  os << ")\n";
  return os.str();
}

}  // namespace flowrt::cft
