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

#include "gradcodec/container.hpp"

#include <array>

#include "gradcodec/error.hpp"

namespace gradcodec {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'G', 'C', 'V', '1'};
constexpr std::size_t kHeaderBytes = 4 + 1 + 4 + 4;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes[at + i]} << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> write_container(const MessageContainer& message) {
  if (message.payload.size() > 0xffffffffu) throw Overflow("payload longer than 2^32-1 bits");
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.push_back(message.tag);
  put_u32(out, message.dimension);
  put_u32(out, static_cast<std::uint32_t>(message.payload.size()));
  const auto body = message.payload.to_bytes();
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

MessageContainer read_container(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) throw DecodeError("container header truncated", bytes.size() * 8);
  for (std::size_t i = 0; i < kMagic.size(); ++i) {
    if (bytes[i] != kMagic[i]) throw DecodeError("bad container magic", i * 8);
  }
  MessageContainer message;
  message.tag = bytes[4];
  message.dimension = get_u32(bytes, 5);
  const std::uint32_t bit_length = get_u32(bytes, 9);
  const auto body = bytes.subspan(kHeaderBytes);
  if (std::size_t{bit_length} > body.size() * 8) {
    throw DecodeError("container payload truncated", bytes.size() * 8);
  }
  message.payload = BitString::from_bytes(body, bit_length);
  return message;
}

}  // namespace gradcodec
