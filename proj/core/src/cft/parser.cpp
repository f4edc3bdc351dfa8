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

#include "flowrt/cft/parser.hpp"

#include <charconv>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "lexer.hpp"

namespace flowrt::cft {

ParseError::ParseError(Kind kind, SourceLoc loc, const std::string& message)
    : Error(std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " +
            std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      loc_(loc),
      detail_(message) {}

std::string_view to_string(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::syntax: return "SyntaxError";
    case ParseError::Kind::unknown_opcode: return "UnknownOpcode";
    case ParseError::Kind::unknown_import: return "UnknownImport";
    case ParseError::Kind::duplicate_export: return "DuplicateExport";
    case ParseError::Kind::invalid_module: return "InvalidModule";
  }
  return "ParseError";
}

namespace {

using detail::SExpr;
using detail::TokKind;
using Kind = ParseError::Kind;

[[noreturn]] void fail(Kind kind, SourceLoc loc, const std::string& msg) {
  throw ParseError(kind, loc, msg);
}

[[noreturn]] void syntax(const SExpr& at, const std::string& msg) {
  fail(Kind::syntax, at.token.loc, msg);
}

struct Integer {
  bool negative = false;
  std::uint64_t magnitude = 0;
};

std::optional<Integer> parse_integer(std::string_view s) {
  Integer out;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    out.negative = s[0] == '-';
    s.remove_prefix(1);
  }
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
  }
  if (s.empty()) return std::nullopt;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out.magnitude, base);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return out;
}

// Accepts the union of the signed and unsigned ranges of the given width and
// wraps to two's complement.
std::optional<std::int64_t> parse_const(std::string_view s, ValType t) {
  auto v = parse_integer(s);
  if (!v) return std::nullopt;
  if (t == ValType::i32) {
    if (v->negative ? v->magnitude > (1ull << 31) : v->magnitude > 0xFFFFFFFFull) return std::nullopt;
    const std::uint32_t bits = v->negative ? static_cast<std::uint32_t>(0u - v->magnitude)
                                           : static_cast<std::uint32_t>(v->magnitude);
    return static_cast<std::int32_t>(bits);
  }
  if (v->negative && v->magnitude > (1ull << 63)) return std::nullopt;
  const std::uint64_t bits = v->negative ? 0ull - v->magnitude : v->magnitude;
  return static_cast<std::int64_t>(bits);
}

std::optional<std::uint32_t> parse_u32(std::string_view s) {
  if (s.empty() || s[0] == '-' || s[0] == '+') return std::nullopt;
  auto v = parse_integer(s);
  if (!v || v->magnitude > std::numeric_limits<std::uint32_t>::max()) return std::nullopt;
  return static_cast<std::uint32_t>(v->magnitude);
}

bool is_id(const SExpr& e) { return e.is_atom() && e.token.text.size() > 1 && e.token.text[0] == '$'; }

std::string id_name(const SExpr& e) { return e.token.text.substr(1); }

ValType expect_val_type(const SExpr& e) {
  if (e.is_atom()) {
    if (auto t = parse_val_type(e.token.text)) return *t;
  }
  syntax(e, "expected value type i32 or i64");
}

class ModuleParser {
 public:
  Module parse(const SExpr& root) {
    if (!root.is_form("module")) syntax(root, "expected (module ...)");
    std::size_t first = 1;
    if (root.items.size() > 1 && is_id(root.items[1])) first = 2;  // optional module name

    // Pass 1: declarations and the identifier namespaces.
    std::vector<const SExpr*> func_forms;
    std::vector<const SExpr*> thread_forms;
    std::vector<const SExpr*> export_forms;
    for (std::size_t i = first; i < root.items.size(); ++i) {
      const SExpr& f = root.items[i];
      if (!f.is_list || f.items.empty() || !f.items[0].is_atom()) syntax(f, "expected a module field");
      const std::string& head = f.items[0].token.text;
      if (head == "memory") {
        parse_memory(f);
      } else if (head == "import") {
        parse_import(f);
      } else if (head == "global") {
        parse_global(f);
      } else if (head == "func") {
        func_forms.push_back(&f);
      } else if (head == "threads") {
        thread_forms.push_back(&f);
      } else if (head == "export") {
        export_forms.push_back(&f);
      } else {
        syntax(f.items[0], "unknown module field '" + head + "'");
      }
    }

    for (const SExpr* f : func_forms) {
      const auto index = static_cast<std::uint32_t>(m_.imports.size() + func_ids_.size());
      std::string id;
      if (f->items.size() > 1 && is_id(f->items[1])) id = id_name(f->items[1]);
      declare(func_names_, id, index, *f, "function");
      func_ids_.push_back(id);
    }

    // Pass 2: function bodies and references.
    for (const SExpr* f : func_forms) m_.functions.push_back(parse_func(*f));
    for (const SExpr* f : thread_forms) {
      for (std::size_t i = 1; i < f->items.size(); ++i) m_.threads.push_back(func_ref(f->items[i]));
    }
    for (const SExpr* f : export_forms) parse_export(*f);

    if (m_.memories.size() != 1) {
      fail(Kind::invalid_module, root.token.loc,
           "module must declare exactly one memory, found " + std::to_string(m_.memories.size()));
    }
    bool has_main = false;
    for (const auto& e : m_.exports) {
      if (e.name == "main") {
        m_.entry = e.func;
        has_main = true;
      }
    }
    if (!has_main) fail(Kind::invalid_module, root.token.loc, "missing \"main\" export");
    return std::move(m_);
  }

 private:
  void declare(std::unordered_map<std::string, std::uint32_t>& space, const std::string& id,
               std::uint32_t index, const SExpr& at, const char* what) {
    if (id.empty()) return;
    if (!space.emplace(id, index).second) syntax(at, std::string("duplicate ") + what + " $" + id);
  }

  void parse_memory(const SExpr& f) {
    MemoryDecl mem;
    mem.loc = f.token.loc;
    std::vector<std::uint32_t> limits;
    for (std::size_t i = 1; i < f.items.size(); ++i) {
      const SExpr& e = f.items[i];
      if (e.is_atom("shared")) {
        mem.shared = true;
      } else if (e.is_atom()) {
        auto v = parse_u32(e.token.text);
        if (!v) syntax(e, "expected page count");
        limits.push_back(*v);
      } else {
        syntax(e, "unexpected memory field");
      }
    }
    if (limits.empty() || limits.size() > 2) syntax(f, "memory needs min and optional max pages");
    mem.min_pages = limits[0];
    mem.max_pages = limits.size() == 2 ? limits[1] : limits[0];
    m_.memories.push_back(mem);
  }

  FuncType parse_signature(const SExpr& f, std::size_t& i, std::vector<std::string>* names) {
    FuncType ty;
    for (; i < f.items.size(); ++i) {
      const SExpr& e = f.items[i];
      if (e.is_form("param")) {
        if (!ty.results.empty()) syntax(e, "param after result");
        if (e.items.size() == 3 && is_id(e.items[1])) {
          ty.params.push_back(expect_val_type(e.items[2]));
          if (names) names->push_back(id_name(e.items[1]));
          continue;
        }
        for (std::size_t k = 1; k < e.items.size(); ++k) {
          ty.params.push_back(expect_val_type(e.items[k]));
          if (names) names->emplace_back();
        }
      } else if (e.is_form("result")) {
        for (std::size_t k = 1; k < e.items.size(); ++k) ty.results.push_back(expect_val_type(e.items[k]));
        if (ty.results.size() > 1) syntax(e, "at most one result is supported");
      } else {
        break;
      }
    }
    return ty;
  }

  void parse_import(const SExpr& f) {
    if (f.items.size() != 4 || !f.items[1].is_string() || !f.items[2].is_string() ||
        !f.items[3].is_form("func")) {
      syntax(f, "expected (import \"ns\" \"name\" (func ...))");
    }
    Import imp;
    imp.loc = f.token.loc;
    imp.module_name = f.items[1].token.text;
    imp.name = f.items[2].token.text;
    const SExpr& fn = f.items[3];
    std::size_t i = 1;
    if (i < fn.items.size() && is_id(fn.items[i])) imp.id = id_name(fn.items[i++]);
    imp.type = parse_signature(fn, i, nullptr);
    if (i != fn.items.size()) syntax(fn.items[i], "unexpected item in import signature");

    const HostFunction* host = find_host_function(imp.module_name, imp.name);
    if (host == nullptr) {
      fail(Kind::unknown_import, imp.loc, "no host function " + imp.module_name + "." + imp.name);
    }
    if (host->type != imp.type) {
      fail(Kind::unknown_import, imp.loc,
           "signature of " + imp.module_name + "." + imp.name + " does not match the host registry");
    }
    imp.host = host->id;
    declare(func_names_, imp.id, static_cast<std::uint32_t>(m_.imports.size()), f, "function");
    m_.imports.push_back(std::move(imp));
  }

  void parse_global(const SExpr& f) {
    Global g;
    g.loc = f.token.loc;
    std::size_t i = 1;
    if (i < f.items.size() && is_id(f.items[i])) g.id = id_name(f.items[i++]);
    if (i >= f.items.size()) syntax(f, "global needs a type");
    const SExpr& t = f.items[i++];
    if (t.is_form("mut")) {
      if (t.items.size() != 2) syntax(t, "expected (mut type)");
      g.is_mutable = true;
      g.type = expect_val_type(t.items[1]);
    } else {
      g.type = expect_val_type(t);
    }
    if (i + 1 != f.items.size()) syntax(f, "global needs exactly one constant initializer");
    const SExpr& init = f.items[i];
    const char* want = g.type == ValType::i32 ? "i32.const" : "i64.const";
    if (!init.is_form(want) || init.items.size() != 2 || !init.items[1].is_atom()) {
      syntax(init, std::string("expected (") + want + " N) initializer");
    }
    auto v = parse_const(init.items[1].token.text, g.type);
    if (!v) syntax(init.items[1], "constant out of range");
    g.init = *v;
    declare(global_names_, g.id, static_cast<std::uint32_t>(m_.globals.size()), f, "global");
    m_.globals.push_back(std::move(g));
  }

  void parse_export(const SExpr& f) {
    if (f.items.size() != 3 || !f.items[1].is_string() || !f.items[2].is_form("func") ||
        f.items[2].items.size() != 2) {
      syntax(f, "expected (export \"name\" (func ref))");
    }
    const std::string& name = f.items[1].token.text;
    for (const auto& e : m_.exports) {
      if (e.name == name) fail(Kind::duplicate_export, f.token.loc, "duplicate export \"" + name + "\"");
    }
    m_.exports.push_back({name, func_ref(f.items[2].items[1])});
  }

  std::uint32_t func_ref(const SExpr& e) {
    if (is_id(e)) {
      auto it = func_names_.find(id_name(e));
      if (it == func_names_.end()) syntax(e, "unknown function " + e.token.text);
      return it->second;
    }
    if (e.is_atom()) {
      if (auto v = parse_u32(e.token.text)) return *v;
    }
    syntax(e, "expected function reference");
  }

  FuncDef parse_func(const SExpr& f) {
    FuncDef fn;
    fn.loc = f.token.loc;
    std::size_t i = 1;
    if (i < f.items.size() && is_id(f.items[i])) fn.id = id_name(f.items[i++]);
    if (i < f.items.size() && f.items[i].is_form("thread")) {
      const SExpr& t = f.items[i++];
      if (t.items.size() != 2 || !t.items[1].is_atom()) syntax(t, "expected (thread <device-class>)");
      auto cls = parse_device_class(t.items[1].token.text);
      if (!cls) syntax(t.items[1], "unknown device class '" + t.items[1].token.text + "'");
      fn.hint = AffinityHint{*cls};
    }
    fn.type = parse_signature(f, i, &fn.local_names);
    std::vector<std::string> local_ids;
    for (; i < f.items.size() && f.items[i].is_form("local"); ++i) {
      const SExpr& e = f.items[i];
      if (e.items.size() == 3 && is_id(e.items[1])) {
        fn.locals.push_back(expect_val_type(e.items[2]));
        local_ids.push_back(id_name(e.items[1]));
        continue;
      }
      for (std::size_t k = 1; k < e.items.size(); ++k) {
        fn.locals.push_back(expect_val_type(e.items[k]));
        local_ids.emplace_back();
      }
    }
    fn.local_names.insert(fn.local_names.end(), local_ids.begin(), local_ids.end());
    // Drop the name table entirely when nothing is named.
    bool any_named = false;
    for (const auto& n : fn.local_names) any_named |= !n.empty();
    if (!any_named) fn.local_names.clear();

    locals_.clear();
    for (std::size_t k = 0; k < fn.local_names.size(); ++k) {
      if (fn.local_names[k].empty()) continue;
      if (!locals_.emplace(fn.local_names[k], static_cast<std::uint32_t>(k)).second) {
        syntax(f, "duplicate local $" + fn.local_names[k]);
      }
    }
    labels_.clear();
    body_ = &fn.body;
    func_form_ = &f;
    parse_seq(f, i, f.items.size());
    if (!labels_.empty()) syntax(f, "unterminated block in function body");
    return fn;
  }

  // Flat and folded instructions may be mixed freely within a sequence, but a
  // flat block opened inside a folded form must also close there.
  void parse_seq(const SExpr& parent, std::size_t i, std::size_t end) {
    const std::size_t depth = labels_.size();
    while (i < end) {
      if (labels_.size() < depth) syntax(parent.items[i - 1], "end closes an enclosing folded block");
      const SExpr& e = parent.items[i];
      if (e.is_list) {
        parse_folded(e);
        ++i;
      } else {
        i = parse_flat(parent, i, end);
      }
    }
    if (labels_.size() < depth) syntax(parent.items[end - 1], "end closes an enclosing folded block");
    if (labels_.size() > depth && &parent != func_form_) syntax(parent, "unterminated block");
  }

  Opcode expect_opcode(const SExpr& e) {
    if (!e.is_atom()) syntax(e, "expected an instruction");
    auto op = lookup_opcode(e.token.text);
    if (!op) fail(Kind::unknown_opcode, e.token.loc, "unknown opcode '" + e.token.text + "'");
    return *op;
  }

  Instruction make(Opcode op, const SExpr& at) {
    Instruction ins;
    ins.op = op;
    ins.loc = at.token.loc;
    return ins;
  }

  // Reads an optional label and result type; returns the next unread index.
  std::size_t parse_block_header(const SExpr& parent, std::size_t i, std::size_t end,
                                 Instruction& ins, std::string& label) {
    if (i < end && is_id(parent.items[i])) label = id_name(parent.items[i++]);
    if (i < end && parent.items[i].is_form("result")) {
      const SExpr& r = parent.items[i++];
      if (r.items.size() != 2) syntax(r, "block result must be a single type");
      ins.block_result = expect_val_type(r.items[1]);
    }
    return i;
  }

  // Reads the immediates of a non-block opcode starting at items[i].
  std::size_t parse_immediates(const SExpr& parent, std::size_t i, std::size_t end, Instruction& ins,
                               const SExpr& at) {
    const Imm imm = info(ins.op).imm;
    auto need = [&]() -> const SExpr& {
      if (i >= end || !parent.items[i].is_atom()) {
        syntax(at, "missing immediate for " + std::string(to_string(ins.op)));
      }
      return parent.items[i++];
    };
    switch (imm) {
      case Imm::none:
      case Imm::block_type:
        break;
      case Imm::i32_value:
      case Imm::i64_value: {
        const SExpr& v = need();
        auto c = parse_const(v.token.text, imm == Imm::i32_value ? ValType::i32 : ValType::i64);
        if (!c) syntax(v, "invalid integer constant '" + v.token.text + "'");
        ins.value = *c;
        break;
      }
      case Imm::local_index:
        ins.index = resolve(need(), locals_, "local");
        break;
      case Imm::global_index:
        ins.index = resolve(need(), global_names_, "global");
        break;
      case Imm::func_index:
        ins.index = func_ref(need());
        break;
      case Imm::label_depth: {
        const SExpr& v = need();
        if (is_id(v)) {
          const std::string name = id_name(v);
          bool found = false;
          for (std::size_t d = 0; d < labels_.size(); ++d) {
            if (labels_[labels_.size() - 1 - d].name == name) {
              ins.index = static_cast<std::uint32_t>(d);
              found = true;
              break;
            }
          }
          if (!found) syntax(v, "unknown label " + v.token.text);
        } else {
          auto d = parse_u32(v.token.text);
          if (!d) syntax(v, "expected branch depth");
          ins.index = *d;
        }
        break;
      }
      case Imm::mem_offset:
        while (i < end && parent.items[i].is_atom()) {
          const std::string& t = parent.items[i].token.text;
          if (t.rfind("offset=", 0) == 0) {
            auto v = parse_u32(std::string_view(t).substr(7));
            if (!v) syntax(parent.items[i], "invalid offset");
            ins.index = *v;
          } else if (t.rfind("align=", 0) == 0) {
            auto v = parse_u32(std::string_view(t).substr(6));
            if (!v || *v == 0 || (*v & (*v - 1)) != 0) syntax(parent.items[i], "invalid alignment");
          } else {
            break;
          }
          ++i;
        }
        break;
    }
    return i;
  }

  std::uint32_t resolve(const SExpr& v, const std::unordered_map<std::string, std::uint32_t>& space,
                        const char* what) {
    if (is_id(v)) {
      auto it = space.find(id_name(v));
      if (it == space.end()) syntax(v, std::string("unknown ") + what + " " + v.token.text);
      return it->second;
    }
    auto idx = parse_u32(v.token.text);
    if (!idx) syntax(v, std::string("expected ") + what + " index");
    return *idx;
  }

  std::size_t parse_flat(const SExpr& parent, std::size_t i, std::size_t end) {
    const SExpr& at = parent.items[i];
    const Opcode op = expect_opcode(at);
    Instruction ins = make(op, at);
    ++i;
    switch (op) {
      case Opcode::block:
      case Opcode::loop:
      case Opcode::if_: {
        std::string label;
        i = parse_block_header(parent, i, end, ins, label);
        labels_.push_back({label, op});
        body_->push_back(ins);
        return i;
      }
      case Opcode::else_:
        if (labels_.empty() || labels_.back().op != Opcode::if_ || labels_.back().saw_else) {
          syntax(at, "else without matching if");
        }
        labels_.back().saw_else = true;
        body_->push_back(ins);
        return i;
      case Opcode::end:
        if (labels_.empty()) syntax(at, "end without matching block");
        labels_.pop_back();
        body_->push_back(ins);
        return i;
      default:
        i = parse_immediates(parent, i, end, ins, at);
        body_->push_back(ins);
        return i;
    }
  }

  void parse_folded(const SExpr& e) {
    if (e.items.empty()) syntax(e, "empty instruction");
    const Opcode op = expect_opcode(e.items[0]);
    Instruction ins = make(op, e.items[0]);
    const std::size_t end = e.items.size();
    switch (op) {
      case Opcode::block:
      case Opcode::loop: {
        std::string label;
        std::size_t i = parse_block_header(e, 1, end, ins, label);
        body_->push_back(ins);
        labels_.push_back({label, op});
        parse_seq(e, i, end);
        labels_.pop_back();
        body_->push_back(make(Opcode::end, e));
        return;
      }
      case Opcode::if_: {
        std::string label;
        std::size_t i = parse_block_header(e, 1, end, ins, label);
        const SExpr* then_form = nullptr;
        const SExpr* else_form = nullptr;
        for (; i < end; ++i) {
          const SExpr& c = e.items[i];
          if (c.is_form("then")) {
            then_form = &c;
          } else if (c.is_form("else")) {
            if (then_form == nullptr) syntax(c, "(else) before (then)");
            else_form = &c;
          } else if (then_form != nullptr) {
            syntax(c, "unexpected item after (then)");
          } else if (c.is_list) {
            parse_folded(c);  // condition operands
          } else {
            syntax(c, "folded if condition must be folded instructions");
          }
        }
        if (then_form == nullptr) syntax(e, "folded if requires (then ...)");
        body_->push_back(ins);
        labels_.push_back({label, op});
        parse_seq(*then_form, 1, then_form->items.size());
        if (else_form != nullptr) {
          body_->push_back(make(Opcode::else_, *else_form));
          parse_seq(*else_form, 1, else_form->items.size());
        }
        labels_.pop_back();
        body_->push_back(make(Opcode::end, e));
        return;
      }
      case Opcode::else_:
      case Opcode::end:
        syntax(e, "'" + std::string(to_string(op)) + "' cannot be folded");
      default: {
        std::size_t i = parse_immediates(e, 1, end, ins, e.items[0]);
        for (; i < end; ++i) {
          if (!e.items[i].is_list) syntax(e.items[i], "unexpected atom in folded instruction");
          parse_folded(e.items[i]);
        }
        body_->push_back(ins);
        return;
      }
    }
  }

  struct Label {
    std::string name;
    Opcode op;
    bool saw_else = false;
  };

  Module m_;
  std::vector<std::string> func_ids_;
  std::unordered_map<std::string, std::uint32_t> func_names_;
  std::unordered_map<std::string, std::uint32_t> global_names_;
  std::unordered_map<std::string, std::uint32_t> locals_;
  std::vector<Label> labels_;
  std::vector<Instruction>* body_ = nullptr;
  const SExpr* func_form_ = nullptr;
};

}  // namespace

const FuncType& Module::func_type(std::uint32_t f) const {
  return is_import(f) ? imports.at(f).type : defined(f).type;
}

std::string Module::func_name(std::uint32_t f) const {
  if (f >= function_count()) return std::to_string(f);
  const std::string& id = is_import(f) ? imports.at(f).id : defined(f).id;
  return id.empty() ? std::to_string(f) : "$" + id;
}

Module parse_module(std::string_view text) {
  return ModuleParser().parse(detail::read_sexpr(text));
}

}  // namespace flowrt::cft
