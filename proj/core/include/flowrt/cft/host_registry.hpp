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
#include <span>
#include <string_view>
#include <vector>

#include "flowrt/cft/opcode.hpp"

namespace flowrt::cft {

struct FuncType {
  std::vector<ValType> params;
  std::vector<ValType> results;
  friend bool operator==(const FuncType&, const FuncType&) = default;
};

enum class HostFn : std::uint8_t {
  fd_read,
  fd_write,
  sock_send,
  sock_recv,
  clock_time_get,
  proc_exit,
  spawn,
  join,
};

struct HostFunction {
  HostFn id;
  std::string_view module_name;
  std::string_view name;
  FuncType type;
};

// Every host function a module may import, with its exact signature.
std::span<const HostFunction> host_registry();
const HostFunction* find_host_function(std::string_view module_name, std::string_view name);
const HostFunction& host_function(HostFn id);

}  // namespace flowrt::cft
