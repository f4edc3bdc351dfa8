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
#include <deque>
#include <map>
#include <vector>

namespace flowrt::engine {

inline constexpr std::int32_t kErrnoBadf = 8;

// Virtual I/O environment supplied with a run: file contents keyed by fd.
struct HostEnv {
  std::map<std::int32_t, std::vector<std::uint8_t>> files;
};

// Mutable I/O state of a running instance.
struct HostState {
  std::map<std::int32_t, std::vector<std::uint8_t>> files;
  std::map<std::int32_t, std::size_t> read_cursor;
  std::deque<std::uint8_t> loopback;  // single in-instance socket FIFO

  explicit HostState(HostEnv env = {}) : files(std::move(env.files)) {}

  // Reads up to `len` bytes from fd, advancing its cursor. Returns -1 for an
  // unknown fd.
  std::int64_t read(std::int32_t fd, std::uint8_t* dst, std::uint32_t len);
  void write(std::int32_t fd, const std::uint8_t* src, std::uint32_t len);
  std::uint32_t sock_send(const std::uint8_t* src, std::uint32_t len);
  std::uint32_t sock_recv(std::uint8_t* dst, std::uint32_t len);
};

}  // namespace flowrt::engine
