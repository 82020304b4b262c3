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
#include <cmath>
#include <numeric>

#include "codec_util.hpp"
#include "gradcodec/compressors.hpp"
#include "gradcodec/geometry.hpp"

namespace gradcodec {

namespace {

// Trial t >= 1 of a message owns blocks [(t-1) * ceil(d/2), t * ceil(d/2)) of
// the message stream; coordinate i is half i % 2 of block i / 2 in that range.
class TrialStream {
 public:
  TrialStream(std::size_t d, MessageSeed seed)
      : d_(d), blocks_per_trial_((d + 1) / 2), rng_(seed.seed, seed.message) {}

  std::uint64_t first_block(std::uint64_t t) const { return (t - 1) * blocks_per_trial_; }

  std::pair<double, double> pair(std::uint64_t t, std::size_t block) const {
    return rng_.normal_pair_at(first_block(t) + block);
  }

  // Gaussian vector of trial t in coordinate order.
  std::vector<double> gaussian(std::uint64_t t) const {
    std::vector<double> g(d_);
    for (std::size_t b = 0; b < blocks_per_trial_; ++b) {
      const auto [z0, z1] = pair(t, b);
      g[2 * b] = z0;
      if (2 * b + 1 < d_) g[2 * b + 1] = z1;
    }
    return g;
  }

  std::size_t d() const { return d_; }
  std::size_t blocks_per_trial() const { return blocks_per_trial_; }

 private:
  std::size_t d_;
  std::size_t blocks_per_trial_;
  CounterRng rng_;
};

// Unit direction of a Gaussian draw; empty for the all-zero draw.
std::vector<double> normalize(std::vector<double> g) {
  double sq = 0.0;
  for (double v : g) sq += v * v;
  if (sq == 0.0) return {};
  const double inv = 1.0 / std::sqrt(sq);
  for (auto& v : g) v *= inv;
  return g;
}

std::vector<double> scale_point(const std::vector<double>& direction, double scale) {
  std::vector<double> y(direction.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = scale * direction[i];
  return y;
}

}  // namespace

double sc_expected_trials(double alpha, std::size_t d) {
  return 1.0 / cap_probability(CapParams::make(alpha, d));
}

std::uint64_t sc_trial_cap(double alpha, std::size_t d) {
  const double expected = std::ceil(sc_expected_trials(alpha, d));
  constexpr double kMax = 1.8e19;
  return expected * 50.0 >= kMax ? static_cast<std::uint64_t>(kMax)
                                 : static_cast<std::uint64_t>(50.0 * expected);
}

std::vector<double> sc_trial_direction(std::size_t d, MessageSeed message_seed, std::uint64_t t) {
  if (t < 1) throw InvalidArgument("trial index starts at 1");
  return normalize(TrialStream(d, message_seed).gaussian(t));
}

Compressed sc_compress(std::span<const double> x, double alpha, MessageSeed message_seed) {
  const auto params = CapParams::make(alpha, x.size());
  detail::check_finite(x);
  const std::size_t d = x.size();
  const double norm = detail::euclidean_norm(x);
  const float norm_f = to_binary32_magnitude(norm);

  Compressed c;
  append_float_magnitude(c.payload, norm_f);
  if (norm_f == 0.0f) {
    c.outcome.reconstructed.assign(d, 0.0);
    c.outcome.bits = c.payload.size();
    c.outcome.distortion = normalized_distortion(x, c.outcome.reconstructed);
    return c;
  }

  const double p = cap_probability(params);
  const unsigned m = golomb_rice_params(p);
  const std::uint64_t cap = sc_trial_cap(alpha, d);
  const double scale = static_cast<double>(norm_f) * std::sqrt(1.0 - alpha);
  const double x_sq = squared_norm(x);
  const double budget = alpha * x_sq;

  // A trial point s v (s = scale, ||v|| = 1) is accepted iff
  // ||s v - x||^2 <= alpha ||x||^2, i.e. <v, u> >= c with u = x / ||x||.
  // Blocks (coordinate pairs) are visited by decreasing mass of u; once the
  // unvisited mass a^2 drops below c^2, <g, u> - c ||g|| <= S - sqrt(N (c^2 - a^2))
  // for partial sums S = <g, u>, N = ||g||^2, so hopeless trials stop early.
  // The margin keeps this test strictly weaker than the exact one below.
  const double x_norm = std::sqrt(x_sq);
  const double c_min = (scale * scale + (1.0 - alpha) * x_sq) / (2.0 * scale * x_norm);
  const double c_sq = c_min * c_min;
  const TrialStream stream(d, message_seed);
  const std::size_t nb = stream.blocks_per_trial();
  std::vector<double> u(2 * nb, 0.0);  // padded with a zero coordinate for odd d
  for (std::size_t i = 0; i < d; ++i) u[i] = x[i] / x_norm;
  std::vector<double> block_mass(nb);
  for (std::size_t b = 0; b < nb; ++b) block_mass[b] = u[2 * b] * u[2 * b] + u[2 * b + 1] * u[2 * b + 1];
  std::vector<std::size_t> order(nb);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return block_mass[a] > block_mass[b]; });
  std::vector<double> rest(nb + 1, 0.0);  // rest[j] = mass of blocks order[j..]
  for (std::size_t j = nb; j-- > 0;) rest[j] = rest[j + 1] + block_mass[order[j]];
  std::size_t first_prunable = nb;
  for (std::size_t j = 0; j <= nb; ++j) {
    if (rest[j] < c_sq) {
      first_prunable = j;
      break;
    }
  }
  std::vector<double> bound_factor(nb + 1, 0.0);
  for (std::size_t j = first_prunable; j <= nb; ++j) bound_factor[j] = std::sqrt(c_sq - rest[j]);
  const bool odd = d % 2 == 1;
  constexpr double kMargin = 1e-9;

  for (std::uint64_t t = 1; t <= cap; ++t) {
    double dot = 0.0;
    double sq = 0.0;
    bool hopeless = false;
    for (std::size_t j = 0; j < nb; ++j) {
      const std::size_t b = order[j];
      const auto [z0, z1] = stream.pair(t, b);
      dot += z0 * u[2 * b];
      sq += z0 * z0;
      if (!(odd && b == nb - 1)) {
        dot += z1 * u[2 * b + 1];
        sq += z1 * z1;
      }
      if (j + 1 >= first_prunable) {
        const double root_n = std::sqrt(sq);
        if (dot - root_n * bound_factor[j + 1] < -kMargin * (1.0 + root_n)) {
          hopeless = true;
          break;
        }
      }
    }
    if (hopeless) continue;

    const auto direction = normalize(stream.gaussian(t));
    if (direction.empty()) continue;
    auto y = scale_point(direction, scale);
    double err = 0.0;
    for (std::size_t i = 0; i < d; ++i) err += (y[i] - x[i]) * (y[i] - x[i]);
    if (err <= budget) {
      append_golomb_rice(c.payload, t, m);
      c.trials = t;
      c.outcome.reconstructed = std::move(y);
      c.outcome.bits = c.payload.size();
      c.outcome.distortion = normalized_distortion(x, c.outcome.reconstructed);
      return c;
    }
  }
  throw NumericalError("spherical compression exceeded its trial cap of " + std::to_string(cap));
}

std::vector<double> sc_decompress(const BitString& bits, std::size_t d, double alpha,
                                  MessageSeed message_seed, std::optional<unsigned> m_override) {
  const auto params = CapParams::make(alpha, d);
  BitCursor cursor(bits);
  const float norm_f = read_float_magnitude(cursor);
  if (norm_f == 0.0f) {
    detail::expect_end(cursor);
    return std::vector<double>(d, 0.0);
  }
  const unsigned m = m_override ? *m_override : golomb_rice_params(cap_probability(params));
  const std::size_t t_at = cursor.position();
  const std::uint64_t t = golomb_rice_decode(cursor, m);
  detail::expect_end(cursor);
  auto direction = sc_trial_direction(d, message_seed, t);
  if (direction.empty()) throw DecodeError("trial count names a degenerate draw", t_at);
  const double scale = static_cast<double>(norm_f) * std::sqrt(1.0 - alpha);
  return scale_point(direction, scale);
}

}  // namespace gradcodec
