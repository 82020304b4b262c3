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

#include "gradcodec/bitio.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "gradcodec/error.hpp"

namespace gradcodec {

BitString BitString::from_string(std::string_view bits) {
  BitString out;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InvalidArgument("bit string may only contain '0' and '1'");
    out.push_back(c == '1');
  }
  return out;
}

void BitString::push_back(bool bit) {
  if ((size_ & 63) == 0) words_.push_back(0);
  if (bit) words_.back() |= std::uint64_t{1} << (size_ & 63);
  ++size_;
}

void BitString::append_repeated(bool bit, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) push_back(bit);
}

void BitString::append(const BitString& other) {
  for (std::size_t i = 0; i < other.size_; ++i) push_back(other[i]);
}

void BitString::append_bits(std::uint64_t value, unsigned width) {
  for (unsigned i = width; i-- > 0;) push_back((value >> i) & 1u);
}

std::string BitString::to_string() const {
  std::string s;
  s.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) s.push_back((*this)[i] ? '1' : '0');
  return s;
}

std::vector<std::uint8_t> BitString::to_bytes() const {
  std::vector<std::uint8_t> bytes((size_ + 7) / 8, 0);
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return bytes;
}

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes, std::size_t bit_length) {
  if (bit_length > bytes.size() * 8) throw TruncatedStream(bytes.size() * 8);
  BitString out;
  for (std::size_t i = 0; i < bit_length; ++i) out.push_back((bytes[i / 8] >> (7 - i % 8)) & 1u);
  return out;
}

bool operator==(const BitString& a, const BitString& b) {
  // Unused high bits of the last word are always zero.
  return a.size_ == b.size_ && a.words_ == b.words_;
}

BitString operator+(BitString a, const BitString& b) {
  a.append(b);
  return a;
}

bool BitCursor::read_bit() {
  if (pos_ >= source_->size()) throw TruncatedStream(pos_);
  return (*source_)[pos_++];
}

std::uint64_t BitCursor::read_bits(unsigned width) {
  if (width > 64) throw InvalidArgument("read_bits width exceeds 64");
  if (remaining() < width) throw TruncatedStream(source_->size());
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint64_t>((*source_)[pos_++]);
  return v;
}

BitString write_unary(std::int64_t k) {
  if (k < 1) throw InvalidArgument("unary code requires k >= 1");
  BitString out;
  append_unary(out, static_cast<std::uint64_t>(k));
  return out;
}

void append_unary(BitString& out, std::uint64_t k) {
  if (k < 1) throw InvalidArgument("unary code requires k >= 1");
  out.append_repeated(true, k - 1);
  out.push_back(false);
}

std::uint64_t read_unary(BitCursor& cursor) {
  std::uint64_t k = 1;
  while (cursor.read_bit()) ++k;
  return k;
}

BitString write_fixed(std::uint64_t value, unsigned width) {
  if (width > 64) throw InvalidArgument("fixed width exceeds 64 bits");
  if (width < 64 && (value >> width) != 0) {
    throw Overflow("value " + std::to_string(value) + " does not fit in " + std::to_string(width) +
                   " bits");
  }
  BitString out;
  out.append_bits(value, width);
  return out;
}

std::uint64_t read_fixed(BitCursor& cursor, unsigned width) { return cursor.read_bits(width); }

unsigned bits_for_count(std::uint64_t count) {
  if (count <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(count - 1));
}

unsigned bits_for_count(const BigUint& count) {
  if (count <= 1) return 0;
  BigUint top = count - 1;
  return static_cast<unsigned>(boost::multiprecision::msb(top)) + 1;
}

unsigned count_field_width(std::size_t d) { return bits_for_count(static_cast<std::uint64_t>(d) + 1); }

unsigned golomb_rice_params(double p) {
  if (!(p > 0.0 && p < 0.5)) throw InvalidArgument("Golomb-Rice parameter requires p in (0, 1/2)");
  const double lower = 1.0 / (2.0 * p);
  unsigned m = 0;
  while (std::ldexp(1.0, static_cast<int>(m)) < lower) ++m;
  return m;
}

BitString golomb_rice_encode(std::uint64_t value, unsigned m) {
  BitString out;
  append_golomb_rice(out, value, m);
  return out;
}

void append_golomb_rice(BitString& out, std::uint64_t value, unsigned m) {
  if (value < 1) throw InvalidArgument("Golomb-Rice value must be >= 1");
  if (m >= 64) throw InvalidArgument("Golomb-Rice parameter m must be < 64");
  const std::uint64_t q = value >> m;
  const std::uint64_t r = value & ((std::uint64_t{1} << m) - 1);
  out.append_repeated(false, q);
  out.push_back(true);
  out.append_bits(r, m);
}

std::uint64_t golomb_rice_decode(BitCursor& cursor, unsigned m) {
  if (m >= 64) throw InvalidArgument("Golomb-Rice parameter m must be < 64");
  const std::size_t start = cursor.position();
  std::uint64_t q = 0;
  while (!cursor.read_bit()) ++q;
  const std::uint64_t r = cursor.read_bits(m);
  const std::uint64_t value = (q << m) | r;
  if (value == 0) throw DecodeError("Golomb-Rice code decodes to 0", start);
  return value;
}

void append_elias_gamma(BitString& out, std::uint64_t n) {
  if (n < 1) throw InvalidArgument("Elias gamma requires n >= 1");
  const unsigned width = static_cast<unsigned>(std::bit_width(n));
  out.append_repeated(false, width - 1);
  out.append_bits(n, width);
}

std::uint64_t read_elias_gamma(BitCursor& cursor) {
  const std::size_t start = cursor.position();
  unsigned zeros = 0;
  while (!cursor.read_bit()) {
    if (++zeros >= 64) throw DecodeError("Elias gamma prefix too long", start);
  }
  return (std::uint64_t{1} << zeros) | cursor.read_bits(zeros);
}

BigUint binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigUint c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    c *= static_cast<std::uint64_t>(n - k + i);
    c /= static_cast<std::uint64_t>(i);
  }
  return c;
}

// Both directions walk the positions 0..d-1 while tracking C(n, r), where n is
// the number of positions not yet visited and r the number still to choose. At
// each position, C(n-1, r-1) subsets pick it; they precede those that skip it.
BigUint subset_rank(std::span<const std::size_t> positions, std::size_t d) {
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] >= d) throw InvalidArgument("subset position out of range");
    if (i > 0 && positions[i] <= positions[i - 1]) {
      throw InvalidArgument("subset positions must be strictly increasing");
    }
  }
  std::size_t r = positions.size();
  BigUint count = binomial(d, r);
  BigUint rank = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < d && r > 0; ++i) {
    const std::size_t n = d - i;
    BigUint with_i = count * static_cast<std::uint64_t>(r);
    with_i /= static_cast<std::uint64_t>(n);
    if (positions[next] == i) {
      count = std::move(with_i);
      --r;
      ++next;
    } else {
      rank += with_i;
      count *= static_cast<std::uint64_t>(n - r);
      count /= static_cast<std::uint64_t>(n);
    }
  }
  return rank;
}

std::vector<std::size_t> subset_unrank(const BigUint& rank, std::size_t d, std::size_t k) {
  if (k > d) throw InvalidArgument("subset size exceeds dimension");
  BigUint count = binomial(d, k);
  if (rank < 0 || rank >= count) throw InvalidArgument("subset rank out of range");
  BigUint rest = rank;
  std::vector<std::size_t> positions;
  positions.reserve(k);
  std::size_t r = k;
  for (std::size_t i = 0; i < d && r > 0; ++i) {
    const std::size_t n = d - i;
    BigUint with_i = count * static_cast<std::uint64_t>(r);
    with_i /= static_cast<std::uint64_t>(n);
    if (rest < with_i) {
      positions.push_back(i);
      count = std::move(with_i);
      --r;
    } else {
      rest -= with_i;
      count *= static_cast<std::uint64_t>(n - r);
      count /= static_cast<std::uint64_t>(n);
    }
  }
  return positions;
}

void append_big(BitString& out, const BigUint& value, unsigned width) {
  if (value < 0 || (value > 0 && boost::multiprecision::msb(value) >= width)) {
    throw Overflow("integer does not fit in " + std::to_string(width) + " bits");
  }
  for (unsigned i = width; i-- > 0;) out.push_back(boost::multiprecision::bit_test(value, i));
}

BigUint read_big(BitCursor& cursor, unsigned width) {
  if (cursor.remaining() < width) throw TruncatedStream(cursor.position() + cursor.remaining());
  BigUint v = 0;
  for (unsigned i = width; i-- > 0;) {
    if (cursor.read_bit()) boost::multiprecision::bit_set(v, i);
  }
  return v;
}

void append_subset(BitString& out, std::span<const std::size_t> positions, std::size_t d) {
  const unsigned width = bits_for_count(binomial(d, positions.size()));
  append_big(out, subset_rank(positions, d), width);
}

std::vector<std::size_t> read_subset(BitCursor& cursor, std::size_t d, std::size_t k) {
  if (k > d) throw DecodeError("subset size exceeds dimension", cursor.position());
  const BigUint count = binomial(d, k);
  const std::size_t start = cursor.position();
  const BigUint rank = read_big(cursor, bits_for_count(count));
  if (rank >= count) throw DecodeError("subset rank out of range", start);
  return subset_unrank(rank, d, k);
}

float to_binary32_magnitude(double gamma) {
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw InvalidArgument("magnitude must be finite and non-negative");
  }
  const float f = static_cast<float>(gamma);
  if (!std::isfinite(f)) throw InvalidArgument("magnitude overflows binary32");
  return std::fabs(f);
}

BitString write_float_magnitude(double gamma) {
  BitString out;
  append_float_magnitude(out, gamma);
  return out;
}

void append_float_magnitude(BitString& out, double gamma) {
  const auto bits = std::bit_cast<std::uint32_t>(to_binary32_magnitude(gamma));
  out.append_bits(bits & 0x7fffffffu, kMagnitudeBits);
}

float read_float_magnitude(BitCursor& cursor) {
  const std::size_t start = cursor.position();
  const auto bits = static_cast<std::uint32_t>(cursor.read_bits(kMagnitudeBits));
  const float f = std::bit_cast<float>(bits);
  if (!std::isfinite(f)) throw DecodeError("non-finite magnitude", start);
  return f;
}

void append_float32(BitString& out, float value) {
  out.append_bits(std::bit_cast<std::uint32_t>(value), 32);
}

float read_float32(BitCursor& cursor) {
  const std::size_t start = cursor.position();
  const float f = std::bit_cast<float>(static_cast<std::uint32_t>(cursor.read_bits(32)));
  if (!std::isfinite(f)) throw DecodeError("non-finite float", start);
  return f;
}

}  // namespace gradcodec
