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

#include <string>
#include <string_view>
#include <vector>

#include "flowrt/cft/module.hpp"

namespace flowrt::cft::detail {

enum class TokKind { lparen, rparen, atom, string, eof };

struct Token {
  TokKind kind = TokKind::eof;
  std::string text;  // atom text, or decoded string contents
  SourceLoc loc;
};

// Splits CFT source into tokens, dropping whitespace and comments.
// Throws ParseError(syntax) on malformed input.
std::vector<Token> tokenize(std::string_view src);

// S-expression tree built from the token stream.
struct SExpr {
  bool is_list = false;
  Token token;                // for atoms and strings; for lists, the '(' token
  std::vector<SExpr> items;   // list members

  bool is_atom() const { return !is_list && token.kind == TokKind::atom; }
  bool is_string() const { return !is_list && token.kind == TokKind::string; }
  bool is_atom(std::string_view s) const { return is_atom() && token.text == s; }
  // True for a list whose first member is the atom `head`.
  bool is_form(std::string_view head) const {
    return is_list && !items.empty() && items[0].is_atom(head);
  }
};

// Parses the whole source as exactly one top-level S-expression.
SExpr read_sexpr(std::string_view src);

}  // namespace flowrt::cft::detail
