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

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <vector>

#include "gradcodec/bitio.hpp"
#include "gradcodec/container.hpp"
#include "gradcodec/error.hpp"
#include "gradcodec/random.hpp"

using namespace gradcodec;

TEST_CASE("unary code") {
  CHECK(write_unary(1).to_string() == "0");
  CHECK(write_unary(3).to_string() == "110");
  CHECK(write_unary(2).to_string() == "10");
  CHECK_THROWS_AS(write_unary(0), InvalidArgument);
  CHECK_THROWS_AS(write_unary(-2), InvalidArgument);

  const auto bits = BitString::from_string("1100");
  BitCursor cur(bits);
  CHECK(read_unary(cur) == 3);
  CHECK(cur.position() == 3);
  CHECK(read_unary(cur) == 1);
  CHECK(cur.at_end());

  const auto ones = BitString::from_string("1111");
  BitCursor bad(ones);
  CHECK_THROWS_AS(read_unary(bad), TruncatedStream);
}

TEST_CASE("unary length equals k") {
  for (std::int64_t k = 1; k < 200; ++k) {
    const auto b = write_unary(k);
    CHECK(b.size() == static_cast<std::size_t>(k));
    BitCursor cur(b);
    CHECK(read_unary(cur) == static_cast<std::uint64_t>(k));
    CHECK(cur.at_end());
  }
}

TEST_CASE("fixed width") {
  CHECK(write_fixed(5, 4).to_string() == "0101");
  CHECK(write_fixed(0, 3).to_string() == "000");
  CHECK_THROWS_AS(write_fixed(8, 3), Overflow);

  const auto bits = BitString::from_string("0101");
  BitCursor cur(bits);
  CHECK(read_fixed(cur, 4) == 5);
  CHECK_THROWS_AS(read_fixed(cur, 1), TruncatedStream);
}

TEST_CASE("golomb-rice parameter choice") {
  CHECK(golomb_rice_params(0.4) == 1);
  CHECK(golomb_rice_params(0.25) == 1);
  CHECK(golomb_rice_params(0.146447) == 2);
  CHECK_THROWS_AS(golomb_rice_params(0.5), InvalidArgument);
  CHECK_THROWS_AS(golomb_rice_params(0.0), InvalidArgument);

  // 1/(2p) <= 2^m < 1/p across a sweep of p
  for (double p = 0.49; p > 1e-9; p *= 0.83) {
    const unsigned m = golomb_rice_params(p);
    const double pow2 = std::ldexp(1.0, static_cast<int>(m));
    CHECK(pow2 >= 1.0 / (2.0 * p));
    CHECK(pow2 < 1.0 / p);
  }
}

TEST_CASE("golomb-rice encode and decode") {
  CHECK(golomb_rice_encode(5, 2).to_string() == "0101");
  CHECK(golomb_rice_encode(1, 2).to_string() == "101");
  CHECK(golomb_rice_encode(1, 0).to_string() == "01");
  CHECK_THROWS_AS(golomb_rice_encode(0, 2), InvalidArgument);

  {
    const auto b = BitString::from_string("0101");
    BitCursor cur(b);
    CHECK(golomb_rice_decode(cur, 2) == 5);
  }
  {
    const auto b = BitString::from_string("101");
    BitCursor cur(b);
    CHECK(golomb_rice_decode(cur, 2) == 1);
  }
  {
    const auto b = BitString::from_string("100");
    BitCursor cur(b);
    CHECK_THROWS_AS(golomb_rice_decode(cur, 2), DecodeError);
  }
}

TEST_CASE("golomb-rice length and round trip") {
  for (unsigned m = 0; m < 8; ++m) {
    for (std::uint64_t t = 1; t < 300; ++t) {
      const auto b = golomb_rice_encode(t, m);
      CHECK(b.size() == (t >> m) + 1 + m);
      BitCursor cur(b);
      CHECK(golomb_rice_decode(cur, m) == t);
      CHECK(cur.at_end());
    }
  }
}

TEST_CASE("golomb-rice mean length under geometric") {
  CounterRng rng(11, 0);
  for (double p : {0.4, 0.146447, 0.03, 1e-3}) {
    const unsigned m = golomb_rice_params(p);
    const int n = 100000;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      // inverse-cdf geometric draw on {1, 2, ...}
      const double u = 1.0 - rng.uniform();
      const auto t = static_cast<std::uint64_t>(std::ceil(std::log(u) / std::log1p(-p)));
      total += static_cast<double>(golomb_rice_encode(std::max<std::uint64_t>(t, 1), m).size());
    }
    CHECK(total / n <= -std::log2(p) + 3.0);
  }
}

TEST_CASE("elias gamma") {
  BitString out;
  for (std::uint64_t n = 1; n < 70; ++n) append_elias_gamma(out, n);
  BitCursor cur(out);
  for (std::uint64_t n = 1; n < 70; ++n) CHECK(read_elias_gamma(cur) == n);
  CHECK(cur.at_end());
  BitString one;
  append_elias_gamma(one, 1);
  CHECK(one.to_string() == "1");
}

TEST_CASE("subset rank examples") {
  const std::vector<std::size_t> first{0, 1};
  const std::vector<std::size_t> last{2, 3};
  CHECK(subset_rank(first, 4) == 0);
  CHECK(subset_rank(last, 4) == 5);
  const std::vector<std::size_t> dup{1, 1};
  CHECK_THROWS_AS(subset_rank(dup, 4), InvalidArgument);
  const std::vector<std::size_t> out_of_range{1, 4};
  CHECK_THROWS_AS(subset_rank(out_of_range, 4), InvalidArgument);
  CHECK_THROWS_AS(subset_unrank(BigUint(6), 4, 2), InvalidArgument);
}

TEST_CASE("subset rank is the lexicographic bijection for d <= 8") {
  for (std::size_t d = 1; d <= 8; ++d) {
    for (std::size_t k = 0; k <= d; ++k) {
      // enumerate k-subsets in lexicographic order by walking bitmasks as
      // sorted position lists
      std::vector<std::vector<std::size_t>> subsets;
      for (unsigned mask = 0; mask < (1u << d); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < d; ++i)
          if (mask & (1u << i)) s.push_back(i);
        subsets.push_back(s);
      }
      std::sort(subsets.begin(), subsets.end());
      CHECK(BigUint(subsets.size()) == binomial(d, k));
      for (std::size_t r = 0; r < subsets.size(); ++r) {
        CHECK(subset_rank(subsets[r], d) == BigUint(r));
        CHECK(subset_unrank(BigUint(r), d, k) == subsets[r]);
        BitString b;
        append_subset(b, subsets[r], d);
        CHECK(b.size() == bits_for_count(binomial(d, k)));
        BitCursor cur(b);
        CHECK(read_subset(cur, d, k) == subsets[r]);
      }
    }
  }
}

TEST_CASE("subset code at large d") {
  const std::size_t d = 5000;
  CounterRng rng(3, 1);
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < d; ++i)
    if (rng.uniform() < 0.3) pos.push_back(i);
  BitString b;
  append_subset(b, pos, d);
  BitCursor cur(b);
  CHECK(read_subset(cur, d, pos.size()) == pos);
  CHECK(cur.at_end());
}

TEST_CASE("count field width") {
  CHECK(count_field_width(1) == 1);
  CHECK(count_field_width(3) == 2);
  CHECK(count_field_width(4) == 3);
  CHECK(count_field_width(10000) == 14);
  CHECK(bits_for_count(std::uint64_t{1}) == 0);
  CHECK(bits_for_count(std::uint64_t{6}) == 3);
  CHECK(bits_for_count(std::uint64_t{8}) == 3);
}

TEST_CASE("float magnitude") {
  CHECK(write_float_magnitude(0.0).to_string() == std::string(31, '0'));
  const auto one = write_float_magnitude(1.0).to_string();
  CHECK(one.substr(0, 8) == "01111111");
  CHECK(one.substr(8) == std::string(23, '0'));
  CHECK_THROWS_AS(write_float_magnitude(-1.0), InvalidArgument);
  CHECK_THROWS_AS(write_float_magnitude(std::nan("")), InvalidArgument);

  CounterRng rng(5, 0);
  for (int i = 0; i < 1000; ++i) {
    const double g = rng.uniform() * 1e6;
    const auto b = write_float_magnitude(g);
    CHECK(b.size() == 31);
    BitCursor cur(b);
    CHECK(read_float_magnitude(cur) == static_cast<float>(g));
    CHECK(cur.at_end());
  }
}

TEST_CASE("float32 with sign") {
  for (float v : {-3.5f, 0.0f, 1e-20f, 7.25e12f}) {
    BitString b;
    append_float32(b, v);
    CHECK(b.size() == 32);
    BitCursor cur(b);
    CHECK(read_float32(cur) == v);
  }
}

TEST_CASE("bitstring bytes") {
  const auto b = BitString::from_string("1011001110001");
  const auto bytes = b.to_bytes();
  REQUIRE(bytes.size() == 2);
  CHECK(bytes[0] == 0b10110011);
  CHECK(bytes[1] == 0b10001000);
  CHECK(BitString::from_bytes(bytes, 13) == b);
  CHECK_THROWS(BitString::from_string("10a"));
}

TEST_CASE("container") {
  MessageContainer m;
  m.tag = 3;
  m.dimension = 70000;
  m.payload = BitString::from_string("1101");
  const auto bytes = write_container(m);
  REQUIRE(bytes.size() == 4 + 1 + 4 + 4 + 1);
  CHECK(std::memcmp(bytes.data(), "GCV1", 4) == 0);
  CHECK(bytes[4] == 3);
  CHECK(bytes[5] == 0x70);
  CHECK(bytes[6] == 0x11);
  CHECK(bytes[7] == 0x01);
  CHECK(bytes[9] == 4);
  CHECK(bytes[13] == 0b11010000);

  const auto back = read_container(bytes);
  CHECK(back.tag == 3);
  CHECK(back.dimension == 70000);
  CHECK(back.payload == m.payload);

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(read_container(bad_magic), DecodeError);
  std::vector<std::uint8_t> short_header(bytes.begin(), bytes.begin() + 7);
  CHECK_THROWS_AS(read_container(short_header), DecodeError);
  std::vector<std::uint8_t> short_payload(bytes.begin(), bytes.end() - 1);
  CHECK_THROWS_AS(read_container(short_payload), DecodeError);
}
