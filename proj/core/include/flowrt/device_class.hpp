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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace flowrt {

// Device classes a thread can be scheduled to.
enum class DeviceClass : std::uint8_t {
  cpu,
  parallel_accelerator,
  storage_processor,
  network_processor,
};

inline constexpr std::array<DeviceClass, 4> kAllDeviceClasses = {
    DeviceClass::cpu, DeviceClass::parallel_accelerator,
    DeviceClass::storage_processor, DeviceClass::network_processor};

constexpr std::string_view to_string(DeviceClass c) {
  switch (c) {
    case DeviceClass::cpu: return "cpu";
    case DeviceClass::parallel_accelerator: return "parallel_accelerator";
    case DeviceClass::storage_processor: return "storage_processor";
    case DeviceClass::network_processor: return "network_processor";
  }
  return "?";
}

constexpr std::optional<DeviceClass> parse_device_class(std::string_view s) {
  for (DeviceClass c : kAllDeviceClasses) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

}  // namespace flowrt
