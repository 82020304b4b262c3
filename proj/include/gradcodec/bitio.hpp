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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gradcodec {

using BigUint = boost::multiprecision::cpp_int;

/// Exact-length bit sequence. Bits are stored in append order, which is also
/// the transmission order; no byte padding is implied by `size()`.
class BitString {
 public:
  BitString() = default;

  /// Builds from a string of '0'/'1' characters (other characters rejected).
  static BitString from_string(std::string_view bits);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool operator[](std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  void push_back(bool bit);
  void append_repeated(bool bit, std::size_t count);
  void append(const BitString& other);

  /// Writes the low `width` bits of `value`, most-significant first.
  void append_bits(std::uint64_t value, unsigned width);

  std::string to_string() const;

  /// Packs into bytes, first bit in the MSB of byte 0, zero padded.
  std::vector<std::uint8_t> to_bytes() const;
  static BitString from_bytes(std::span<const std::uint8_t> bytes, std::size_t bit_length);

  friend bool operator==(const BitString& a, const BitString& b);

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

BitString operator+(BitString a, const BitString& b);

/// Single-consumer read position over a BitString. Reading past the end
/// throws TruncatedStream.
class BitCursor {
 public:
  explicit BitCursor(const BitString& source) : source_(&source) {}

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return source_->size() - pos_; }
  bool at_end() const noexcept { return pos_ == source_->size(); }

  bool read_bit();
  std::uint64_t read_bits(unsigned width);

 private:
  const BitString* source_;
  std::size_t pos_ = 0;
};

// Unary code: k >= 1 as (k-1) ones then a zero.
BitString write_unary(std::int64_t k);
void append_unary(BitString& out, std::uint64_t k);
std::uint64_t read_unary(BitCursor& cursor);

// Fixed width, MSB first.
BitString write_fixed(std::uint64_t value, unsigned width);
std::uint64_t read_fixed(BitCursor& cursor, unsigned width);

/// Number of bits needed to store values in [0, count): ceil(log2(count)),
/// with 0 for count <= 1.
unsigned bits_for_count(std::uint64_t count);
unsigned bits_for_count(const BigUint& count);

/// Width of the n0 field for dimension d: ceil(log2(d+1)).
unsigned count_field_width(std::size_t d);

// Golomb-Rice code with parameter m. T = 2^m q + r is sent as q zeros, a one,
// then r in m bits.
unsigned golomb_rice_params(double p);
BitString golomb_rice_encode(std::uint64_t value, unsigned m);
void append_golomb_rice(BitString& out, std::uint64_t value, unsigned m);
std::uint64_t golomb_rice_decode(BitCursor& cursor, unsigned m);

// Elias gamma code for n >= 1: floor(log2 n) zeros, then n in binary.
void append_elias_gamma(BitString& out, std::uint64_t n);
std::uint64_t read_elias_gamma(BitCursor& cursor);

BigUint binomial(std::size_t n, std::size_t k);

/// Lexicographic rank of a strictly increasing k-subset of [0, d) among all
/// k-subsets in lexicographic order.
BigUint subset_rank(std::span<const std::size_t> positions, std::size_t d);
std::vector<std::size_t> subset_unrank(const BigUint& rank, std::size_t d, std::size_t k);

/// Subset position code with ceil(log2 C(d, k)) bits, rank MSB first.
void append_subset(BitString& out, std::span<const std::size_t> positions, std::size_t d);
std::vector<std::size_t> read_subset(BitCursor& cursor, std::size_t d, std::size_t k);

void append_big(BitString& out, const BigUint& value, unsigned width);
BigUint read_big(BitCursor& cursor, unsigned width);

// Non-negative binary32 magnitude without its sign bit (31 bits).
inline constexpr unsigned kMagnitudeBits = 31;

/// Rounds to binary32 the way write_float_magnitude does.
float to_binary32_magnitude(double gamma);
BitString write_float_magnitude(double gamma);
void append_float_magnitude(BitString& out, double gamma);
float read_float_magnitude(BitCursor& cursor);

// Full binary32 including sign (32 bits).
void append_float32(BitString& out, float value);
float read_float32(BitCursor& cursor);

}  // namespace gradcodec
