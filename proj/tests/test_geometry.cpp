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
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "gradcodec/error.hpp"
#include "gradcodec/geometry.hpp"
#include "gradcodec/random.hpp"

using namespace gradcodec;

namespace {

// Composite Simpson. For a < 1 the substitution t = p * s^(1/a) removes the
// endpoint singularity at 0. Only used with b >= 1.
double quad_inc_beta(double p, double a, double b) {
  const int n = 20000;
  auto f = [&](double s) {
    if (a < 1.0) return std::pow(1.0 - p * std::pow(s, 1.0 / a), b - 1.0) * std::pow(p, a) / a;
    const double t = p * s;
    return std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0) * p;
  };
  double sum = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(static_cast<double>(i) / n);
  return sum / (3.0 * n) / std::beta(a, b);
}

}  // namespace

TEST_CASE("incomplete beta closed forms") {
  CHECK(reg_inc_beta(0.0, 2.0, 3.0) == 0.0);
  CHECK(reg_inc_beta(1.0, 2.0, 3.0) == 1.0);
  CHECK(reg_inc_beta(0.5, 1.0, 0.5) == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-13));
  CHECK(reg_inc_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
  for (double p : {0.01, 0.2, 0.7, 0.99}) {
    const double arcsine = 2.0 / std::numbers::pi * std::asin(std::sqrt(p));
    CHECK(std::abs(reg_inc_beta(p, 0.5, 0.5) - arcsine) < 1e-12);
  }
  CHECK_THROWS_AS(reg_inc_beta(-0.1, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(reg_inc_beta(0.5, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(reg_inc_beta(0.5, 1.0, -1.0), InvalidArgument);
}

TEST_CASE("incomplete beta against quadrature") {
  for (double a : {0.5, 1.0, 2.5, 7.0}) {
    for (double b : {1.0, 1.5, 4.0}) {
      for (double p : {0.05, 0.3, 0.5, 0.8, 0.97}) {
        CHECK(std::abs(reg_inc_beta(p, a, b) - quad_inc_beta(p, a, b)) < 1e-9);
      }
    }
  }
}

TEST_CASE("incomplete beta against boost and reflection") {
  for (double a : {0.5, 1.0, 12.5, 249.5, 4999.5}) {
    for (double b : {0.5, 2.0, 30.0}) {
      for (double p : {1e-6, 0.1, 0.4, 0.5, 0.75, 0.999}) {
        const double v = reg_inc_beta(p, a, b);
        CHECK(std::abs(v - boost::math::ibeta(a, b, p)) < 1e-12);
        CHECK(std::abs(v - (1.0 - reg_inc_beta(1.0 - p, b, a))) < 1e-12);
      }
    }
  }
}

TEST_CASE("incomplete beta monotone in p") {
  for (double a : {0.5, 4.5, 60.0}) {
    double prev = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double v = reg_inc_beta(i / 400.0, a, 0.5);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("log incomplete beta stays finite when the value underflows") {
  const double l = log_reg_inc_beta(0.1, 5000.0, 0.5);
  CHECK(std::isfinite(l));
  CHECK(l < -10000.0);
  CHECK(log_reg_inc_beta(0.3, 4.5, 0.5) ==
        doctest::Approx(std::log(boost::math::ibeta(4.5, 0.5, 0.3))).epsilon(1e-12));
  CHECK(log_beta(3.0, 4.0) == doctest::Approx(std::log(std::beta(3.0, 4.0))).epsilon(1e-13));
}

TEST_CASE("cap probability") {
  CHECK(cap_probability(CapParams::make(0.5, 3)) ==
        doctest::Approx(0.5 * (1.0 - std::sqrt(0.5))).epsilon(1e-13));
  CHECK(cap_probability(CapParams::make(0.5, 2)) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(cap_probability(CapParams::make(1.0 - 1e-12, 10)) == doctest::Approx(0.5).epsilon(1e-5));
  CHECK_THROWS_AS(CapParams::make(0.0, 3), InvalidArgument);
  CHECK_THROWS_AS(CapParams::make(1.0, 3), InvalidArgument);
  CHECK_THROWS_AS(CapParams::make(0.5, 1), InvalidArgument);

  for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9, 0.999}) {
    double prev = 1.0;
    for (std::size_t d : {2, 3, 5, 10, 50, 1000}) {
      const double p = cap_probability(CapParams::make(alpha, d));
      CHECK(p < 0.5);
      CHECK(p < prev);
      prev = p;
    }
  }
  for (std::size_t d : {2, 7, 100}) {
    double prev = 0.0;
    for (double alpha = 0.05; alpha < 1.0; alpha += 0.05) {
      const double p = cap_probability(CapParams::make(alpha, d));
      CHECK(p > prev);
      prev = p;
    }
  }
  // log form keeps going past double underflow
  const double l = log2_cap_probability(CapParams::make(0.1, 100000));
  CHECK(std::isfinite(l));
  CHECK(l < -1074.0);
  CHECK(log2_cap_probability(CapParams::make(0.4, 40)) ==
        doctest::Approx(std::log2(cap_probability(CapParams::make(0.4, 40)))).epsilon(1e-12));
}

TEST_CASE("philox known answer") {
  const auto zero = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);
  const auto ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               {0xffffffffu, 0xffffffffu});
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);
}

TEST_CASE("counter rng replays and separates streams") {
  CounterRng a(9, 4), b(9, 4), c(9, 5);
  bool differ = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differ |= x != c.next_u64();
  }
  CHECK(differ);
  CounterRng r(1, 2);
  r.seek_block(17);
  const auto w = r.next_u32();
  CHECK(w == r.block(17)[0]);
  for (int i = 0; i < 1000; ++i) CHECK(r.below(7) < 7);
}

TEST_CASE("sphere sampling") {
  CounterRng rng(21, 0);
  int plus = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto v = sample_unit_sphere(1, rng);
    REQUIRE(v.size() == 1);
    CHECK(std::abs(std::abs(v[0]) - 1.0) < 1e-15);
    plus += v[0] > 0;
  }
  CHECK(std::abs(plus - 5000) < 4 * 50);

  const int n = 100000;
  std::vector<double> mean(5, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto v = sample_unit_sphere(5, rng);
    double sq = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
      mean[j] += v[j];
      sq += v[j] * v[j];
    }
    CHECK(std::abs(sq - 1.0) < 1e-12);
  }
  for (double m : mean) CHECK(std::abs(m / n) < 4.0 / std::sqrt(static_cast<double>(n)));

  int in_cap = 0;
  const int trials = 1000000;
  for (int i = 0; i < trials; ++i) in_cap += sample_unit_sphere(3, rng)[0] >= std::sqrt(0.5);
  CHECK(std::abs(static_cast<double>(in_cap) / trials - 0.1464) <= 0.0015);
}

TEST_CASE("monte carlo cap oracle") {
  CounterRng rng(33, 0);
  {
    const auto est = mc_cap_probability(CapParams::make(0.5, 3), 1000000, rng);
    CHECK(std::abs(est.probability - 0.14645) <= 4 * est.std_error);
    CHECK(est.trials == 1000000);
  }
  {
    const auto est = mc_cap_probability(CapParams::make(0.99, 2), 100000, rng);
    const double exact = std::asin(std::sqrt(0.99)) / std::numbers::pi;
    CHECK(exact == doctest::Approx(0.46809).epsilon(1e-4));
    CHECK(std::abs(est.probability - exact) <= 4 * est.std_error);
  }
  CHECK_THROWS_AS(mc_cap_probability(CapParams::make(0.5, 3), 0, rng), InvalidArgument);
}

TEST_CASE("cap probability agrees with the monte carlo oracle on a grid") {
  CounterRng rng(34, 0);
  for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (std::size_t d : {2, 3, 5, 10, 50}) {
      const auto params = CapParams::make(alpha, d);
      const double p = cap_probability(params);
      const std::size_t trials = 1000000;
      const auto est = mc_cap_probability(params, trials, rng);
      CHECK_MESSAGE(std::abs(est.probability - p) <= 4 * std::sqrt(p * (1 - p) / trials),
                    "alpha=" << alpha << " d=" << d);
    }
  }
}
