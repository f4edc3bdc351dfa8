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

#include "lexer.hpp"

#include "flowrt/cft/parser.hpp"

namespace flowrt::cft::detail {
namespace {

[[noreturn]] void fail(SourceLoc loc, const std::string& msg) {
  throw ParseError(ParseError::Kind::syntax, loc, msg);
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_atom_char(unsigned char c) {
  return c > 0x20 && c < 0x7f && c != '(' && c != ')' && c != '"' && c != ';';
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Length of the UTF-8 sequence starting at s[i], or 0 when malformed.
std::size_t utf8_length(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if (b0 < 0x80) return 1;
  if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
  else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
  else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
  else return 0;
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  // Overlong encodings and surrogates are rejected.
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
      cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return 0;
  }
  return len;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      SourceLoc loc = here();
      if (pos_ >= src_.size()) {
        out.push_back({TokKind::eof, {}, loc});
        return out;
      }
      const char c = src_[pos_];
      if (c == '(') {
        advance(1);
        out.push_back({TokKind::lparen, "(", loc});
      } else if (c == ')') {
        advance(1);
        out.push_back({TokKind::rparen, ")", loc});
      } else if (c == '"') {
        out.push_back({TokKind::string, read_string(), loc});
      } else if (is_atom_char(static_cast<unsigned char>(c))) {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_atom_char(static_cast<unsigned char>(src_[pos_]))) advance(1);
        out.push_back({TokKind::atom, std::string(src_.substr(start, pos_ - start)), loc});
      } else {
        fail(loc, "unexpected character");
      }
    }
  }

 private:
  SourceLoc here() const { return {line_, col_}; }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && pos_ < src_.size(); ++k) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_trivia() {
    for (;;) {
      while (pos_ < src_.size() && is_space(src_[pos_])) advance(1);
      if (src_.substr(pos_, 2) == ";;") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (src_.substr(pos_, 2) == "(;") {
        skip_block_comment();
      } else {
        return;
      }
    }
  }

  void skip_block_comment() {
    const SourceLoc start = here();
    int depth = 0;
    while (pos_ < src_.size()) {
      if (src_.substr(pos_, 2) == "(;") {
        ++depth;
        advance(2);
      } else if (src_.substr(pos_, 2) == ";)") {
        advance(2);
        if (--depth == 0) return;
      } else {
        advance(1);
      }
    }
    fail(start, "unterminated block comment");
  }

  std::string read_string() {
    const SourceLoc start = here();
    advance(1);
    std::string out;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '"') {
        advance(1);
        return out;
      }
      if (c == '\n') break;
      if (c == '\\') {
        if (pos_ + 1 >= src_.size()) break;
        const char e = src_[pos_ + 1];
        switch (e) {
          case 'n': out += '\n'; advance(2); continue;
          case 't': out += '\t'; advance(2); continue;
          case '\\': out += '\\'; advance(2); continue;
          case '"': out += '"'; advance(2); continue;
          case '\'': out += '\''; advance(2); continue;
          default: break;
        }
        const int hi = hex_digit(e);
        const int lo = pos_ + 2 < src_.size() ? hex_digit(src_[pos_ + 2]) : -1;
        if (hi < 0 || lo < 0) fail(here(), "bad escape in string");
        out += static_cast<char>(hi * 16 + lo);
        advance(3);
        continue;
      }
      const std::size_t len = utf8_length(src_, pos_);
      if (len == 0) fail(here(), "invalid UTF-8 in string");
      if (static_cast<unsigned char>(c) < 0x20) fail(here(), "control character in string");
      out.append(src_.substr(pos_, len));
      pos_ += len;
      col_ += 1;
    }
    fail(start, "unterminated string");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

class Reader {
 public:
  explicit Reader(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SExpr read_top() {
    if (peek().kind != TokKind::lparen) fail(peek().loc, "expected '('");
    SExpr e = read(0);
    if (peek().kind != TokKind::eof) fail(peek().loc, "unexpected input after module");
    return e;
  }

 private:
  static constexpr int kMaxDepth = 512;

  const Token& peek() const { return toks_[pos_]; }

  SExpr read(int depth) {
    const Token& t = toks_[pos_];
    switch (t.kind) {
      case TokKind::atom:
      case TokKind::string:
        ++pos_;
        return SExpr{false, t, {}};
      case TokKind::rparen:
        fail(t.loc, "unexpected ')'");
      case TokKind::eof:
        fail(t.loc, "unexpected end of input");
      case TokKind::lparen:
        break;
    }
    if (depth >= kMaxDepth) fail(t.loc, "nesting too deep");
    SExpr list{true, t, {}};
    ++pos_;
    while (peek().kind != TokKind::rparen) {
      if (peek().kind == TokKind::eof) fail(list.token.loc, "unclosed '('");
      list.items.push_back(read(depth + 1));
    }
    ++pos_;
    return list;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Token> tokenize(std::string_view src) { return Lexer(src).run(); }

SExpr read_sexpr(std::string_view src) { return Reader(tokenize(src)).read_top(); }

}  // namespace flowrt::cft::detail
