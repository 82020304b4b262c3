/*
Copyright 2026 The gradcodec Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gradcodec/bitio.hpp"

namespace gradcodec {

/// GCV1 message container: "GCV1", operator tag (1 byte), d (u32 LE),
/// payload bit length (u32 LE), payload bits zero padded to a byte boundary.
struct MessageContainer {
  std::uint8_t tag = 0;
  std::uint32_t dimension = 0;
  BitString payload;
};

std::vector<std::uint8_t> write_container(const MessageContainer& message);

/// Throws DecodeError on bad magic, short header or short payload. The tag is
/// not validated here.
MessageContainer read_container(std::span<const std::uint8_t> bytes);

}  // namespace gradcodec
