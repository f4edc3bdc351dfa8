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

#include "flowrt/cft/module.hpp"
#include "flowrt/error.hpp"

namespace flowrt::cft {

class ParseError : public Error {
 public:
  enum class Kind { syntax, unknown_opcode, unknown_import, duplicate_export, invalid_module };

  ParseError(Kind kind, SourceLoc loc, const std::string& message);

  Kind kind() const { return kind_; }
  SourceLoc loc() const { return loc_; }
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  SourceLoc loc_;
  std::string detail_;
};

std::string_view to_string(ParseError::Kind kind);

/// Parses CFT source into a Module with every symbolic reference resolved to
/// an index. Numeric indices are kept verbatim and range-checked later by
/// validate_module(). Throws ParseError.
Module parse_module(std::string_view text);

}  // namespace flowrt::cft
