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

#include "flowrt/cft/host_registry.hpp"

#include <array>

namespace flowrt::cft {
namespace {

constexpr ValType I = ValType::i32;

const std::array<HostFunction, 8>& table() {
  static const std::array<HostFunction, 8> t = {{
      {HostFn::fd_read, "wasi", "fd_read", {{I, I, I, I}, {I}}},
      {HostFn::fd_write, "wasi", "fd_write", {{I, I, I, I}, {I}}},
      {HostFn::sock_send, "wasi", "sock_send", {{I, I}, {I}}},
      {HostFn::sock_recv, "wasi", "sock_recv", {{I, I}, {I}}},
      {HostFn::clock_time_get, "wasi", "clock_time_get", {{I}, {I}}},
      {HostFn::proc_exit, "wasi", "proc_exit", {{I}, {}}},
      {HostFn::spawn, "codeflow", "spawn", {{I, I}, {I}}},
      {HostFn::join, "codeflow", "join", {{I}, {I}}},
  }};
  return t;
}

}  // namespace

std::span<const HostFunction> host_registry() { return table(); }

const HostFunction* find_host_function(std::string_view module_name, std::string_view name) {
  for (const auto& h : table()) {
    if (h.module_name == module_name && h.name == name) return &h;
  }
  return nullptr;
}

const HostFunction& host_function(HostFn id) { return table()[static_cast<std::size_t>(id)]; }

}  // namespace flowrt::cft
