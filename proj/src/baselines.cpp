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

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "codec_util.hpp"
#include "gradcodec/compressors.hpp"

namespace gradcodec {

namespace {

Compressed package(std::span<const double> x, BitString payload, std::vector<double> reconstructed) {
  Compressed c;
  c.payload = std::move(payload);
  c.outcome.bits = c.payload.size();
  c.outcome.distortion = normalized_distortion(x, reconstructed);
  c.outcome.reconstructed = std::move(reconstructed);
  return c;
}

float to_float32(double v) {
  const float f = static_cast<float>(v);
  if (!std::isfinite(f)) throw InvalidArgument("value overflows binary32");
  return f;
}

// [k binary32 values in position order][subset rank of the positions].
Compressed sparse_message(std::span<const double> x, const std::vector<std::size_t>& positions,
                          double value_scale) {
  const std::size_t d = x.size();
  BitString payload;
  std::vector<double> out(d, 0.0);
  for (auto i : positions) {
    const float f = to_float32(x[i] * value_scale);
    append_float32(payload, f);
    out[i] = f;
  }
  append_subset(payload, positions, d);
  return package(x, std::move(payload), std::move(out));
}

}  // namespace

Compressed identity_compress(std::span<const double> x) {
  detail::check_finite(x);
  BitString payload;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const float f = to_float32(x[i]);
    append_float32(payload, f);
    out[i] = f;
  }
  return package(x, std::move(payload), std::move(out));
}

std::vector<double> identity_decompress(const BitString& bits, std::size_t d) {
  BitCursor cursor(bits);
  std::vector<double> out(d);
  for (auto& v : out) v = read_float32(cursor);
  detail::expect_end(cursor);
  return out;
}

Compressed topk_compress(std::span<const double> x, std::size_t k) {
  const std::size_t d = x.size();
  if (k < 1 || k > d) throw InvalidArgument("k must satisfy 1 <= k <= d");
  detail::check_finite(x);
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Largest magnitudes first; equal magnitudes keep the lower index.
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double fa = std::fabs(x[a]);
                      const double fb = std::fabs(x[b]);
                      return fa != fb ? fa > fb : a < b;
                    });
  std::vector<std::size_t> positions(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(positions.begin(), positions.end());
  return sparse_message(x, positions, 1.0);
}

Compressed random_sparsify(std::span<const double> x, std::size_t k, CounterRng& rng) {
  const std::size_t d = x.size();
  if (k < 1 || k > d) throw InvalidArgument("k must satisfy 1 <= k <= d");
  detail::check_finite(x);
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(d - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<std::size_t> positions(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(positions.begin(), positions.end());
  return sparse_message(x, positions, static_cast<double>(d) / static_cast<double>(k));
}

std::vector<double> sparse_values_decompress(const BitString& bits, std::size_t d, std::size_t k) {
  if (k < 1 || k > d) throw InvalidArgument("k must satisfy 1 <= k <= d");
  BitCursor cursor(bits);
  std::vector<float> values(k);
  for (auto& v : values) v = read_float32(cursor);
  const auto positions = read_subset(cursor, d, k);
  detail::expect_end(cursor);
  std::vector<double> out(d, 0.0);
  for (std::size_t j = 0; j < k; ++j) out[positions[j]] = values[j];
  return out;
}

// Layout: [norm:31][nonzero count: ceil(log2(d+1))], then per nonzero in index
// order: Elias-gamma(gap from previous nonzero, first gap from -1), sign bit,
// Elias-gamma(level).
Compressed std_dither(std::span<const double> x, std::uint32_t levels, CounterRng& rng) {
  if (levels < 1) throw InvalidArgument("levels must be >= 1");
  if (x.empty()) throw InvalidArgument("dimension must be >= 1");
  detail::check_finite(x);
  const std::size_t d = x.size();
  const double norm = detail::euclidean_norm(x);
  const float norm_f = to_binary32_magnitude(norm);
  const double s = levels;

  std::vector<std::uint64_t> level(d, 0);
  std::size_t nonzero = 0;
  if (norm_f != 0.0f) {
    for (std::size_t i = 0; i < d; ++i) {
      const double t = std::fabs(x[i]) / norm * s;
      const double lower = std::floor(t);
      const bool up = rng.uniform() < t - lower;
      level[i] = static_cast<std::uint64_t>(lower) + (up ? 1 : 0);
      if (level[i] != 0) ++nonzero;
    }
  }

  BitString payload;
  append_float_magnitude(payload, norm_f);
  payload.append_bits(nonzero, count_field_width(d));
  std::vector<double> out(d, 0.0);
  std::size_t prev = static_cast<std::size_t>(-1);
  for (std::size_t i = 0; i < d; ++i) {
    if (level[i] == 0) continue;
    append_elias_gamma(payload, i - prev);
    payload.push_back(x[i] < 0.0);
    append_elias_gamma(payload, level[i]);
    const double v = static_cast<double>(norm_f) * static_cast<double>(level[i]) / s;
    out[i] = x[i] < 0.0 ? -v : v;
    prev = i;
  }
  return package(x, std::move(payload), std::move(out));
}

Compressed ternary(std::span<const double> x, CounterRng& rng) { return std_dither(x, 1, rng); }

std::vector<double> std_dither_decompress(const BitString& bits, std::size_t d, std::uint32_t levels) {
  if (levels < 1) throw InvalidArgument("levels must be >= 1");
  BitCursor cursor(bits);
  const float norm_f = read_float_magnitude(cursor);
  const std::size_t count_at = cursor.position();
  const auto nonzero = static_cast<std::size_t>(cursor.read_bits(count_field_width(d)));
  if (nonzero > d) throw DecodeError("nonzero count exceeds dimension", count_at);
  const double s = levels;
  std::vector<double> out(d, 0.0);
  std::size_t prev = static_cast<std::size_t>(-1);
  for (std::size_t j = 0; j < nonzero; ++j) {
    const std::size_t at = cursor.position();
    const std::uint64_t gap = read_elias_gamma(cursor);
    const std::size_t i = prev + static_cast<std::size_t>(gap);
    if (gap > d || i >= d) throw DecodeError("coordinate index out of range", at);
    const bool negative = cursor.read_bit();
    const std::uint64_t level = read_elias_gamma(cursor);
    const double v = static_cast<double>(norm_f) * static_cast<double>(level) / s;
    out[i] = negative ? -v : v;
    prev = i;
  }
  detail::expect_end(cursor);
  return out;
}

// Each coordinate takes 9 bits: a sign bit and the 8-bit binary32 exponent
// field of the power of two it rounds to (field 0 encodes zero).
Compressed natural_compress(std::span<const double> x, CounterRng& rng) {
  if (x.empty()) throw InvalidArgument("dimension must be >= 1");
  detail::check_finite(x);
  constexpr int kMinExp = -126;
  constexpr int kMaxExp = 127;
  const double smallest = std::ldexp(1.0, kMinExp);
  BitString payload;
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::fabs(x[i]);
    const double r = rng.uniform();
    unsigned field = 0;
    if (a >= smallest) {
      int e = 0;
      std::frexp(a, &e);  // a = f 2^e, f in [0.5, 1)
      int low = e - 1;
      const double low_value = std::ldexp(1.0, low);
      if (r < (a - low_value) / low_value) ++low;
      if (low > kMaxExp) throw InvalidArgument("magnitude exceeds the binary32 exponent range");
      field = static_cast<unsigned>(low + 127);
    } else if (a > 0.0 && r < a / smallest) {
      field = static_cast<unsigned>(kMinExp + 127);
    }
    payload.push_back(x[i] < 0.0);
    payload.append_bits(field, 8);
    if (field != 0) {
      const double v = std::ldexp(1.0, static_cast<int>(field) - 127);
      out[i] = x[i] < 0.0 ? -v : v;
    }
  }
  return package(x, std::move(payload), std::move(out));
}

std::vector<double> natural_decompress(const BitString& bits, std::size_t d) {
  BitCursor cursor(bits);
  std::vector<double> out(d, 0.0);
  for (auto& v : out) {
    const std::size_t at = cursor.position();
    const bool negative = cursor.read_bit();
    const auto field = static_cast<unsigned>(cursor.read_bits(8));
    if (field == 255) throw DecodeError("reserved exponent field", at);
    if (field != 0) {
      const double m = std::ldexp(1.0, static_cast<int>(field) - 127);
      v = negative ? -m : m;
    }
  }
  detail::expect_end(cursor);
  return out;
}

}  // namespace gradcodec
