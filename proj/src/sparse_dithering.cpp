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

#include <cmath>

#include "codec_util.hpp"
#include "gradcodec/compressors.hpp"

namespace gradcodec {

void append_sd_message(BitString& out, const SdMessage& message, std::size_t d) {
  const std::size_t nonzero = d - message.n0();
  if (message.n0() > d || message.negative.size() != nonzero || message.levels.size() != nonzero) {
    throw InvalidArgument("inconsistent sparse dithering message");
  }
  append_float_magnitude(out, message.gamma);
  out.append_bits(message.n0(), count_field_width(d));
  append_subset(out, message.zero_positions, d);
  for (bool neg : message.negative) out.push_back(neg);
  for (auto k : message.levels) append_unary(out, k);
}

SdMessage read_sd_message(BitCursor& cursor, std::size_t d) {
  SdMessage m;
  m.gamma = read_float_magnitude(cursor);
  const std::size_t n0_at = cursor.position();
  const auto n0 = static_cast<std::size_t>(cursor.read_bits(count_field_width(d)));
  if (n0 > d) throw DecodeError("zero count exceeds dimension", n0_at);
  m.zero_positions = read_subset(cursor, d, n0);
  const std::size_t nonzero = d - n0;
  m.negative.resize(nonzero);
  for (std::size_t i = 0; i < nonzero; ++i) m.negative[i] = cursor.read_bit();
  m.levels.resize(nonzero);
  for (std::size_t i = 0; i < nonzero; ++i) m.levels[i] = read_unary(cursor);
  return m;
}

std::vector<double> reconstruct_sd(const SdMessage& message, std::size_t d) {
  std::vector<double> out(d, 0.0);
  const double gamma = message.gamma;
  std::size_t zi = 0;
  std::size_t nz = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (zi < message.zero_positions.size() && message.zero_positions[zi] == i) {
      ++zi;
      continue;
    }
    const double v = gamma * static_cast<double>(message.levels[nz]);
    out[i] = message.negative[nz] ? -v : v;
    ++nz;
  }
  return out;
}

std::size_t sd_message_bits(const SdMessage& message, std::size_t d) {
  std::size_t total = kMagnitudeBits + count_field_width(d) +
                      bits_for_count(binomial(d, message.n0())) + (d - message.n0());
  for (auto k : message.levels) total += k;
  return total;
}

std::uint64_t nearest_level(double magnitude, double h) {
  const double t = magnitude / (2.0 * h);
  auto k = static_cast<std::uint64_t>(std::floor(t));
  if (t - static_cast<double>(k) > 0.5) ++k;
  return k;
}

namespace {

SdMessage zero_message(std::size_t d) {
  SdMessage m;
  m.zero_positions.resize(d);
  for (std::size_t i = 0; i < d; ++i) m.zero_positions[i] = i;
  return m;
}

// Builds the message from per-coordinate levels k_i (0 allowed) and signs.
SdMessage assemble(std::span<const double> x, std::span<const std::uint64_t> k, float gamma) {
  SdMessage m;
  m.gamma = gamma;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (k[i] == 0) {
      m.zero_positions.push_back(i);
    } else {
      m.negative.push_back(x[i] < 0.0);
      m.levels.push_back(k[i]);
    }
  }
  return m;
}

Compressed finish(std::span<const double> x, const SdMessage& m) {
  Compressed c;
  append_sd_message(c.payload, m, x.size());
  c.outcome.reconstructed = reconstruct_sd(m, x.size());
  c.outcome.bits = c.payload.size();
  c.outcome.distortion = normalized_distortion(x, c.outcome.reconstructed);
  return c;
}

std::vector<double> decode_all(const BitString& bits, std::size_t d) {
  BitCursor cursor(bits);
  const auto m = read_sd_message(cursor, d);
  detail::expect_end(cursor);
  return reconstruct_sd(m, d);
}

}  // namespace

Compressed dsd_compress(std::span<const double> x, double nu) {
  if (!(nu > 0.0)) throw InvalidArgument("nu must be > 0");
  if (x.empty()) throw InvalidArgument("dimension must be >= 1");
  detail::check_finite(x);
  const std::size_t d = x.size();
  const double norm = detail::euclidean_norm(x);
  if (norm == 0.0) return finish(x, zero_message(d));

  const double h = std::sqrt(nu / static_cast<double>(d));
  std::vector<std::uint64_t> k(d);
  double dot = 0.0;     // sum |x_i| k_i
  double k_sq = 0.0;    // sum k_i^2
  for (std::size_t i = 0; i < d; ++i) {
    k[i] = nearest_level(std::fabs(x[i]) / norm, h);
    const double kd = static_cast<double>(k[i]);
    dot += std::fabs(x[i]) * kd;
    k_sq += kd * kd;
  }
  // All levels zero: C(x) = 0, the angle to x is taken as pi/2.
  if (k_sq == 0.0) return finish(x, zero_message(d));

  // gamma = 2h * gamma*, gamma* = <x, u_hat> / ||u_hat||^2 with u_hat = 2h sign(u) k.
  const float gamma = to_binary32_magnitude(dot / k_sq);
  return finish(x, assemble(x, k, gamma));
}

std::vector<double> dsd_decompress(const BitString& bits, std::size_t d) { return decode_all(bits, d); }

Compressed rsd_compress(std::span<const double> x, double nu, CounterRng& rng) {
  if (!(nu > 0.0)) throw InvalidArgument("nu must be > 0");
  if (x.empty()) throw InvalidArgument("dimension must be >= 1");
  detail::check_finite(x);
  const std::size_t d = x.size();
  const double norm = detail::euclidean_norm(x);
  if (norm == 0.0) return finish(x, zero_message(d));

  const double h = std::sqrt(nu / static_cast<double>(d));
  std::vector<std::uint64_t> k(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double t = std::fabs(x[i]) / norm / (2.0 * h);
    const double lower = std::floor(t);
    // Up with probability (|u_i| - 2kh) / 2h, keeping E[k_hat] = |u_i| / 2h.
    const bool up = rng.uniform() < t - lower;
    k[i] = static_cast<std::uint64_t>(lower) + (up ? 1 : 0);
  }
  const float gamma = to_binary32_magnitude(2.0 * h * norm);
  bool any = false;
  for (auto v : k) any = any || v != 0;
  if (!any) return finish(x, zero_message(d));
  return finish(x, assemble(x, k, gamma));
}

std::vector<double> rsd_decompress(const BitString& bits, std::size_t d) { return decode_all(bits, d); }

}  // namespace gradcodec
