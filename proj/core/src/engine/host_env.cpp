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

#include "flowrt/engine/host_env.hpp"

#include <algorithm>
#include <cstring>

namespace flowrt::engine {

std::int64_t HostState::read(std::int32_t fd, std::uint8_t* dst, std::uint32_t len) {
  auto it = files.find(fd);
  if (it == files.end()) return -1;
  std::size_t& cursor = read_cursor[fd];
  const std::size_t avail = it->second.size() - std::min(cursor, it->second.size());
  const std::size_t n = std::min<std::size_t>(avail, len);
  if (n > 0) std::memcpy(dst, it->second.data() + cursor, n);
  cursor += n;
  return static_cast<std::int64_t>(n);
}

void HostState::write(std::int32_t fd, const std::uint8_t* src, std::uint32_t len) {
  auto& f = files[fd];
  f.insert(f.end(), src, src + len);
}

std::uint32_t HostState::sock_send(const std::uint8_t* src, std::uint32_t len) {
  loopback.insert(loopback.end(), src, src + len);
  return len;
}

std::uint32_t HostState::sock_recv(std::uint8_t* dst, std::uint32_t len) {
  const std::uint32_t n = static_cast<std::uint32_t>(std::min<std::size_t>(len, loopback.size()));
  std::copy_n(loopback.begin(), n, dst);
  loopback.erase(loopback.begin(), loopback.begin() + n);
  return n;
}

}  // namespace flowrt::engine
