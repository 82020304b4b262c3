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

#include <cmath>
#include <tuple>
#include <vector>

#include "gradcodec/bitio.hpp"
#include "gradcodec/bounds.hpp"
#include "gradcodec/compressors.hpp"
#include "gradcodec/error.hpp"
#include "gradcodec/geometry.hpp"
#include "gradcodec/random.hpp"

using namespace gradcodec;

namespace {

std::vector<double> gaussian_vector(std::size_t d, CounterRng& rng, double scale = 1.0) {
  std::vector<double> x(d);
  for (auto& v : x) v = scale * rng.normal();
  return x;
}

std::vector<double> unit_vector(std::size_t d, CounterRng& rng) {
  auto x = gaussian_vector(d, rng);
  const double n = std::sqrt(squared_norm(x));
  for (auto& v : x) v /= n;
  return x;
}

// A mix of dense, heavy-tailed, sparse and tie-prone inputs.
std::vector<double> property_input(std::size_t d, CounterRng& rng, int i) {
  auto x = gaussian_vector(d, rng, std::pow(10.0, 6.0 * rng.uniform() - 3.0));
  if (i % 7 == 3)
    for (std::size_t j = 0; j < d; ++j)
      if (rng.uniform() < 0.6) x[j] = 0.0;
  if (i % 11 == 5)
    for (auto& v : x) v = std::round(v * 4.0);
  if (i % 13 == 6) x[rng.below(d)] *= 1e4;
  return x;
}

std::vector<OperatorConfig> all_configs(std::size_t d) {
  const std::size_t k = std::max<std::size_t>(1, d / 4);
  return {OperatorConfig::identity(),
          OperatorConfig::dsd(0.1),
          OperatorConfig::dsd(2.0),
          OperatorConfig::rsd(0.25, 7),
          OperatorConfig::rsd(0.25, 7).wrapped(0.25),
          OperatorConfig::sc(d == 2 ? 0.5 : 1.0 - 1.0 / static_cast<double>(d), 7),
          OperatorConfig::topk(k),
          OperatorConfig::random_sparse(k, 7),
          OperatorConfig::std_dither(3, 7),
          OperatorConfig::ternary(7),
          OperatorConfig::natural(7)};
}

SdMessage parse_sd(const BitString& payload, std::size_t d) {
  BitCursor cur(payload);
  auto m = read_sd_message(cur, d);
  REQUIRE(cur.at_end());
  return m;
}

}  // namespace

TEST_CASE("dsd worked example") {
  const std::vector<double> x{3.0, 4.0};
  const auto c = dsd_compress(x, 0.1);
  const auto m = parse_sd(c.payload, 2);
  CHECK(m.n0() == 0);
  REQUIRE(m.levels.size() == 2);
  CHECK(m.levels[0] == 1);
  CHECK(m.levels[1] == 2);
  CHECK(m.gamma == 2.2f);
  CHECK(c.outcome.reconstructed[0] == static_cast<double>(2.2f));
  CHECK(c.outcome.reconstructed[1] == 2.0 * static_cast<double>(2.2f));
  CHECK(c.outcome.distortion == doctest::Approx(0.032).epsilon(1e-6));
  CHECK(c.outcome.bits == c.payload.size());
  CHECK(c.outcome.bits == 31 + 2 + 0 + 2 + 3);

  const auto back = dsd_decompress(c.payload, 2);
  CHECK(back == c.outcome.reconstructed);
}

TEST_CASE("dsd zero input and error paths") {
  const std::vector<double> zero(5, 0.0);
  const auto c = dsd_compress(zero, 0.1);
  CHECK(parse_sd(c.payload, 5).n0() == 5);
  CHECK(dsd_decompress(c.payload, 5) == zero);
  CHECK(c.outcome.distortion == 0.0);

  const std::vector<double> bad{1.0, std::nan("")};
  CHECK_THROWS_AS(dsd_compress(bad, 0.1), InvalidArgument);
  const std::vector<double> inf{1.0, INFINITY};
  CHECK_THROWS_AS(dsd_compress(inf, 0.1), InvalidArgument);

  const std::vector<double> x{3.0, 4.0};
  auto payload = dsd_compress(x, 0.1).payload;
  BitString truncated;
  for (std::size_t i = 0; i + 1 < payload.size(); ++i) truncated.push_back(payload[i]);
  CHECK_THROWS_AS(dsd_decompress(truncated, 2), DecodeError);
  BitString longer = payload;
  longer.push_back(false);
  CHECK_THROWS_AS(dsd_decompress(longer, 2), DecodeError);
}

TEST_CASE("dsd all-small coordinates at large nu") {
  // nu >= 1 permits every |u_i| < h; the whole vector is dropped.
  const std::vector<double> x{1.0, 1.0, 1.0, 1.0};
  const auto c = dsd_compress(x, 9.0);
  CHECK(parse_sd(c.payload, 4).n0() == 4);
  CHECK(c.outcome.distortion == doctest::Approx(1.0));
}

TEST_CASE("nearest level ties go down") {
  const double h = 0.25;
  CHECK(nearest_level(3.0 * h, h) == 1);
  CHECK(nearest_level(3.0 * h + 1e-12, h) == 2);
  CHECK(nearest_level(0.99 * h, h) == 0);
  CHECK(nearest_level(h, h) == 0);
  CHECK(nearest_level(2.0 * h, h) == 1);
}

TEST_CASE("sd message layout length") {
  SdMessage m;
  m.gamma = 1.5f;
  m.zero_positions = {1, 4};
  m.negative = {false, true, false};
  m.levels = {1, 3, 2};
  BitString out;
  append_sd_message(out, m, 5);
  // 31 + ceil(log2 6) + ceil(log2 C(5,2)) + 3 signs + (1 + 3 + 2)
  CHECK(out.size() == 31 + 3 + 4 + 3 + 6);
  CHECK(sd_message_bits(m, 5) == out.size());
  BitCursor cur(out);
  const auto back = read_sd_message(cur, 5);
  CHECK(back.zero_positions == m.zero_positions);
  CHECK(back.negative == m.negative);
  CHECK(back.levels == m.levels);
  const auto v = reconstruct_sd(back, 5);
  const std::vector<double> expect{1.5, 0.0, -4.5, 3.0, 0.0};
  CHECK(v == expect);
}

TEST_CASE("dsd distortion and bit accounting over random inputs") {
  CounterRng rng(101, 0);
  for (std::size_t d : {2, 3, 17, 100, 1000}) {
    for (double nu : {0.01, 0.1, 0.5, 0.99}) {
      for (int i = 0; i < 40; ++i) {
        const auto x = property_input(d, rng, i);
        const auto c = dsd_compress(x, nu);
        const auto m = parse_sd(c.payload, d);
        CHECK(c.outcome.bits == sd_message_bits(m, d));
        std::uint64_t level_sum = 0;
        for (auto k : m.levels) level_sum += k;
        const auto expect = 31 + count_field_width(d) +
                            bits_for_count(binomial(d, m.n0())) + (d - m.n0()) + level_sum;
        CHECK(c.outcome.bits == expect);
        if (squared_norm(x) > 0.0) {
          CHECK(c.outcome.distortion <= nu * (1.0 + 1e-6));
          if (d >= 3)
            CHECK(static_cast<double>(c.outcome.bits) <=
                  30.0 + std::log2(static_cast<double>(d)) + dsd_beta(nu) * d + 2.0);
        }
      }
    }
  }
}

TEST_CASE("dsd bit bound at d = 1e4") {
  CounterRng rng(102, 0);
  const std::size_t d = 10000;
  for (int i = 0; i < 5; ++i) {
    const auto c = dsd_compress(unit_vector(d, rng), 0.1);
    CHECK(static_cast<double>(c.outcome.bits) <= 30.0 + std::log2(1e4) + 3.35e4);
    CHECK(c.outcome.distortion <= 0.1);
  }
}

TEST_CASE("sparse dithering levels are scale invariant") {
  CounterRng rng(103, 0);
  for (int i = 0; i < 50; ++i) {
    const std::size_t d = 2 + rng.below(60);
    auto x = gaussian_vector(d, rng);
    auto y = x;
    for (auto& v : y) v *= 3.75;
    {
      const auto a = parse_sd(dsd_compress(x, 0.2).payload, d);
      const auto b = parse_sd(dsd_compress(y, 0.2).payload, d);
      CHECK(a.zero_positions == b.zero_positions);
      CHECK(a.negative == b.negative);
      CHECK(a.levels == b.levels);
    }
    {
      CounterRng r1(5, i), r2(5, i);
      const auto a = parse_sd(rsd_compress(x, 0.25, r1).payload, d);
      const auto b = parse_sd(rsd_compress(y, 0.25, r2).payload, d);
      CHECK(a.zero_positions == b.zero_positions);
      CHECK(a.negative == b.negative);
      CHECK(a.levels == b.levels);
    }
  }
}

TEST_CASE("rsd unbiased with bounded second moment") {
  CounterRng src(104, 0);
  const std::size_t d = 20;
  const double nu = 0.25;
  const auto x = gaussian_vector(d, src);
  const int n = 100000;
  std::vector<double> mean(d, 0.0), m2(d, 0.0);
  double sq_mean = 0.0, sq_m2 = 0.0;
  for (int t = 0; t < n; ++t) {
    CounterRng rng(55, t);
    const auto c = rsd_compress(x, nu, rng);
    const auto& v = c.outcome.reconstructed;
    for (std::size_t i = 0; i < d; ++i) {
      const double delta = v[i] - mean[i];
      mean[i] += delta / (t + 1);
      m2[i] += delta * (v[i] - mean[i]);
    }
    const double s = squared_norm(v);
    const double delta = s - sq_mean;
    sq_mean += delta / (t + 1);
    sq_m2 += delta * (s - sq_mean);
  }
  for (std::size_t i = 0; i < d; ++i) {
    const double se = std::sqrt(m2[i] / (n - 1) / n);
    // binary32 rounding of gamma shifts the mean by a relative 2^-24 at most
    CHECK_MESSAGE(std::abs(mean[i] - x[i]) <= 4 * se + 1e-7 * std::abs(x[i]), "coordinate " << i);
  }
  const double se = std::sqrt(sq_m2 / (n - 1) / n);
  CHECK(sq_mean <= (1.0 + nu) * squared_norm(x) + 4 * se);
}

TEST_CASE("rsd mean bits at d = 1e4") {
  CounterRng src(105, 0);
  const std::size_t d = 10000;
  double total = 0.0;
  const int n = 20;
  for (int t = 0; t < n; ++t) {
    CounterRng rng(9, t);
    total += static_cast<double>(rsd_compress(unit_vector(d, src), 0.25, rng).outcome.bits);
  }
  const double mean = total / n;
  CHECK(mean <= 30.0 + std::log2(1e4) + (std::log2(3.0) + 1.0) * d);
  CHECK(mean / d > 2.0);
}

TEST_CASE("sc worked cases") {
  const std::vector<double> zero(4, 0.0);
  const auto z = sc_compress(zero, 0.5, {1, 0});
  CHECK(sc_decompress(z.payload, 4, 0.5, {1, 0}) == zero);

  CHECK(sc_expected_trials(0.5, 3) == doctest::Approx(1.0 / 0.1464466).epsilon(1e-6));
  CHECK(sc_trial_cap(0.5, 3) == 50 * 7);
  CHECK(sc_trial_cap(0.5, 2) == 50 * 4);

  // near-hemisphere caps accept on the first trial
  CounterRng rng(106, 0);
  const double alpha = 1.0 - 1e-9;
  const unsigned m = golomb_rice_params(cap_probability(CapParams::make(alpha, 3)));
  int first = 0;
  for (int i = 0; i < 200; ++i) {
    const auto c = sc_compress(gaussian_vector(3, rng), alpha, {2, static_cast<std::uint64_t>(i)});
    if (c.trials == 1) {
      ++first;
      CHECK(c.outcome.bits == 31 + m + 1);
    }
  }
  CHECK(first >= 80);
}

TEST_CASE("sc strict contraction and exact replay") {
  CounterRng rng(107, 0);
  for (std::size_t d : {2, 3, 8, 20}) {
    for (double alpha : {0.3, 0.5, 0.9}) {
      for (std::uint64_t msg = 0; msg < 60; ++msg) {
        const auto x = property_input(d, rng, static_cast<int>(msg));
        const MessageSeed seed{77, msg};
        const auto c = sc_compress(x, alpha, seed);
        CHECK(c.outcome.bits == c.payload.size());
        CHECK(c.outcome.distortion <= alpha);
        CHECK(sc_decompress(c.payload, d, alpha, seed) == c.outcome.reconstructed);
      }
    }
  }
}

TEST_CASE("sc trial count is geometric with the cap probability") {
  CounterRng rng(108, 0);
  const double p = cap_probability(CapParams::make(0.5, 3));
  const int n = 10000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto c = sc_compress(gaussian_vector(3, rng), 0.5, {3, static_cast<std::uint64_t>(i)});
    sum += static_cast<double>(c.trials);
  }
  const double tol = 4.0 * std::sqrt((1.0 - p) / (p * p) / n);
  CHECK(std::abs(sum / n - 1.0 / p) <= tol);
}

TEST_CASE("sc payload is within 3 bits of the lower bound") {
  // (0.5, 50) needs ~3e8 trials per message; these cells stay cheap
  CounterRng rng(109, 0);
  for (auto [alpha, d, n] : {std::tuple{0.5, std::size_t{20}, 300}, std::tuple{0.9, std::size_t{50}, 1000},
                             std::tuple{0.3, std::size_t{5}, 2000}}) {
    double extra = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto c = sc_compress(gaussian_vector(d, rng), alpha, {4, static_cast<std::uint64_t>(i)});
      extra += static_cast<double>(c.outcome.bits - kMagnitudeBits);
    }
    const double lower = -log2_cap_probability(CapParams::make(alpha, d));
    CHECK_MESSAGE(extra / n < lower + 3.0, "alpha=" << alpha << " d=" << d);
    CHECK_MESSAGE(extra / n > lower - 1.0, "alpha=" << alpha << " d=" << d);
  }
}

TEST_CASE("sc decode with the wrong seed breaks the contraction") {
  CounterRng rng(110, 0);
  const std::size_t d = 20;
  const double alpha = 0.5;
  int violated = 0;
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    const auto x = gaussian_vector(d, rng);
    const auto c = sc_compress(x, alpha, {5, static_cast<std::uint64_t>(i)});
    const auto wrong = sc_decompress(c.payload, d, alpha, {6, static_cast<std::uint64_t>(i)});
    violated += normalized_distortion(x, wrong) > alpha;
  }
  CHECK(violated >= 90);
}

TEST_CASE("topk example and baselines") {
  const std::vector<double> x{1.0, -3.0, 2.0};
  const auto c = topk_compress(x, 1);
  const std::vector<double> expect{0.0, -3.0, 0.0};
  CHECK(c.outcome.reconstructed == expect);
  CHECK(c.outcome.distortion == doctest::Approx(5.0 / 14.0));
  CHECK(sparse_values_decompress(c.payload, 3, 1) == expect);

  const auto full = topk_compress(x, 3);
  CHECK(full.outcome.reconstructed == x);

  CounterRng rng(111, 0);
  const auto id = identity_compress(x);
  CHECK(id.outcome.bits == 96);
  CHECK(identity_decompress(id.payload, 3) == x);

  const auto nat = natural_compress(x, rng);
  CHECK(nat.outcome.bits == 27);
  for (std::size_t i = 0; i < 3; ++i) {
    const double v = nat.outcome.reconstructed[i];
    CHECK(std::signbit(v) == std::signbit(x[i]));
    const double e = std::log2(std::abs(v));
    CHECK(e == std::round(e));
  }
}

TEST_CASE("operator classes and wrap") {
  CHECK(operator_class(OperatorConfig::dsd(0.1), 10).label() == "C(0.1)");
  CHECK(operator_class(OperatorConfig::dsd(3.0), 10).parameter == 1.0);
  CHECK(operator_class(OperatorConfig::rsd(0.25), 10).label() == "U(0.25)");
  CHECK(operator_class(OperatorConfig::rsd(0.25).wrapped(0.25), 10).label() == "B(0.2)");
  CHECK(operator_class(OperatorConfig::topk(3), 12).parameter == doctest::Approx(0.75));
  CHECK(operator_class(OperatorConfig::random_sparse(3), 12).parameter == doctest::Approx(3.0));
  CHECK(operator_class(OperatorConfig::natural(), 12).parameter == doctest::Approx(0.125));
  CHECK(operator_class(OperatorConfig::sc(0.4), 12).kind == OperatorClassKind::StrictlyContractive);

  const std::vector<double> x{0.5, -2.0, 1.25};
  const auto plain = compress(OperatorConfig::identity(), x);
  const auto wrapped = compress(OperatorConfig::identity().wrapped(0.0), x);
  CHECK(wrapped.outcome.reconstructed == plain.outcome.reconstructed);

  const auto r = compress(OperatorConfig::rsd(0.25, 3), x, 4);
  const auto w = compress(OperatorConfig::rsd(0.25, 3).wrapped(0.25), x, 4);
  CHECK(w.outcome.bits == r.outcome.bits);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(w.outcome.reconstructed[i] == doctest::Approx(0.8 * r.outcome.reconstructed[i]));
}

TEST_CASE("wrapped rsd mean distortion") {
  CounterRng src(112, 0);
  const std::size_t d = 20;
  const auto x = gaussian_vector(d, src);
  const auto config = OperatorConfig::rsd(0.25, 8).wrapped(0.25);
  const int n = 100000;
  double mean = 0.0, m2 = 0.0;
  for (int t = 0; t < n; ++t) {
    const double v = compress(config, x, t).outcome.distortion;
    const double delta = v - mean;
    mean += delta / (t + 1);
    m2 += delta * (v - mean);
  }
  CHECK(mean <= 0.2 + 4.0 * std::sqrt(m2 / (n - 1) / n));
}

TEST_CASE("config validation and names") {
  CHECK_THROWS_AS(OperatorConfig::dsd(0.0).validate(4), InvalidArgument);
  CHECK_THROWS_AS(OperatorConfig::rsd(-1.0).validate(4), InvalidArgument);
  CHECK_THROWS_AS(OperatorConfig::sc(1.0).validate(4), InvalidArgument);
  CHECK_THROWS_AS(OperatorConfig::sc(0.0).validate(4), InvalidArgument);
  CHECK_THROWS_AS(OperatorConfig::topk(0).validate(4), InvalidArgument);
  CHECK_THROWS_AS(OperatorConfig::topk(5).validate(4), InvalidArgument);
  CHECK_THROWS_AS(OperatorConfig::std_dither(0).validate(4), InvalidArgument);
  CHECK_THROWS_AS(parse_operator_kind("bogus"), InvalidArgument);
  CHECK_THROWS_AS(operator_kind_from_tag(99), DecodeError);
  for (std::uint8_t tag = 0; tag <= 8; ++tag) {
    const auto kind = operator_kind_from_tag(tag);
    CHECK(parse_operator_kind(operator_name(kind)) == kind);
  }
  CHECK(OperatorConfig::dsd(0.1).label() == "DSD(nu=0.1)");
  CHECK(OperatorConfig::rsd(0.25).randomized());
  CHECK_FALSE(OperatorConfig::dsd(0.25).randomized());
}

TEST_CASE("every operator round-trips bit for bit") {
  CounterRng rng(113, 0);
  for (std::size_t d : {2, 3, 17, 64}) {
    for (const auto& config : all_configs(d)) {
      for (std::uint64_t msg = 0; msg < 60; ++msg) {
        const auto x = property_input(d, rng, static_cast<int>(msg));
        const auto c = compress(config, x, msg);
        CHECK(c.outcome.bits == c.payload.size());
        CHECK(c.outcome.distortion >= 0.0);
        const auto back = decompress(config, c.payload, d, msg);
        CHECK_MESSAGE(back == c.outcome.reconstructed, config.label() << " d=" << d);
      }
    }
  }
}
