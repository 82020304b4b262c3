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

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace gradcodec {

/// Philox4x32-10 block function (Salmon et al., Random123).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

/// Deterministic counter-based generator keyed by (seed, stream). Block i of
/// stream s is philox(ctr = {i_lo, i_hi, s_lo, s_hi}, key = seed), so any
/// block can be recomputed without replaying earlier draws. Encoder and
/// decoder use stream = message index.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t block_position() const noexcept { return next_block_; }

  std::array<std::uint32_t, 4> block(std::uint64_t index) const {
    return philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                       static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                      {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
  }

  /// Moves to the start of block `index`, dropping buffered words.
  void seek_block(std::uint64_t index) {
    next_block_ = index;
    word_ = 4;
    has_spare_ = false;
  }

  std::uint32_t next_u32() {
    if (word_ == 4) {
      buffer_ = block(next_block_++);
      word_ = 0;
    }
    return buffer_[word_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), n >= 1 (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) {
    for (;;) {
      const std::uint64_t x = next_u64();
      const unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
      const auto low = static_cast<std::uint64_t>(m);
      if (low >= n || low >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  /// Standard normals, two per block (Box-Muller on the block's two 64-bit
  /// halves). A fresh block is always started after a pair is used up.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    word_ = 4;
    const auto pair = normal_pair_at(next_block_++);
    spare_ = pair.second;
    has_spare_ = true;
    return pair.first;
  }

  /// Drops a cached second normal so the next normal() starts a new block.
  void align_normals() { has_spare_ = false; }

  std::pair<double, double> normal_pair_at(std::uint64_t block_index) const {
    return box_muller(block(block_index));
  }

  static std::pair<double, double> box_muller(const std::array<std::uint32_t, 4>& w) {
    const std::uint64_t a = (std::uint64_t{w[0]} << 32) | w[1];
    const std::uint64_t b = (std::uint64_t{w[2]} << 32) | w[3];
    const double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t next_block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int word_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gradcodec
