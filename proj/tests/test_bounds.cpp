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
#include <string>

#include "gradcodec/bounds.hpp"
#include "gradcodec/error.hpp"
#include "gradcodec/geometry.hpp"

using namespace gradcodec;

TEST_CASE("worst-case lower bound") {
  CHECK(up_lower_bound(0.25, 100) == doctest::Approx(100.0));
  CHECK(up_lower_bound(1.0 - 1e-15, 50) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(up_lower_bound(0.5, 7) == doctest::Approx(3.5));
}

TEST_CASE("average lower bound") {
  CHECK(avg_lower_bound(0.5, 3) == doctest::Approx(-std::log2(0.1464466094)).epsilon(1e-9));
  CHECK(avg_lower_bound(0.5, 3) == doctest::Approx(2.7716).epsilon(1e-4));
  CHECK(avg_lower_bound(0.5, 2) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("b-star estimate") {
  const auto e = bstar_estimate(0.5, 1024);
  const double expect = avg_lower_bound(0.5, 1024) + 10.0 + 0.5 * std::log2(10.0);
  CHECK(e.estimate == doctest::Approx(expect).epsilon(1e-12));
  CHECK(e.band == doctest::Approx(0.5 * std::log2(10.0)));
  CHECK_THROWS_AS(bstar_estimate(0.5, 2), InvalidArgument);
}

TEST_CASE("lower bounds sandwich on a grid") {
  for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (std::size_t d : {3, 5, 10, 50, 100, 1000, 10000}) {
      const auto e = bstar_estimate(alpha, d);
      const double ll = std::log2(std::log2(static_cast<double>(d)));
      CHECK(up_lower_bound(alpha, d) <= e.estimate + 0.5 * ll + 10.0);
      CHECK(std::isfinite(avg_lower_bound(alpha, d)));
      CHECK(avg_lower_bound(alpha, d) <= up_lower_bound(alpha, d) + e.band + 10.0);
    }
  }
}

TEST_CASE("sparse dithering coefficient") {
  // oracle: brute-force maximum of beta(tau, 0.1) over a fine tau grid
  double best = 0.0;
  for (int i = 1; i < 100000; ++i) best = std::max(best, dsd_beta(i / 100000.0, 0.1));
  CHECK(dsd_beta(0.1) >= best - 1e-9);
  CHECK(dsd_beta(0.1) == doctest::Approx(3.3495).epsilon(1e-4));
  CHECK(dsd_beta(0.1) < 3.35);
  CHECK(dsd_tau_star(0.1) == doctest::Approx(0.1697075).epsilon(1e-6));
  CHECK(dsd_predicted_bits(0.1, 10000) <= 30.0 + std::log2(1e4) + 3.35e4);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
}

TEST_CASE("randomized sparse dithering coefficient") {
  CHECK(rsd_bits_per_coordinate(0.25) == doctest::Approx(std::log2(3.0) + 1.0));
  CHECK(rsd_bits_per_coordinate(0.25) == doctest::Approx(2.585).epsilon(1e-3));
  CHECK(rsd_predicted_bits(0.25, 1000) ==
        doctest::Approx(30.0 + std::log2(1000.0) + 2.5849625007 * 1000.0));
}

TEST_CASE("dimension factor") {
  CHECK(dimension_factor(1000) == doctest::Approx(1.0481061).epsilon(1e-6));
  CHECK(dimension_factor_ln(1000) == doctest::Approx(1.0473381).epsilon(1e-6));
  CHECK(std::abs(dimension_factor(1000) - 1.047) < 0.003);
  const double big = dimension_factor(1000000);
  CHECK(big > 1.0);
  CHECK(big < 1.001);
  double prev = dimension_factor(100);
  for (std::size_t d = 200; d <= 100000; d *= 2) {
    const double v = dimension_factor(d);
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(dimension_factor(2), InvalidArgument);
}

TEST_CASE("savings table") {
  for (std::size_t d : {100, 1000, 100000}) {
    const auto rows = savings_table(d, std::max<std::size_t>(1, d / 100));
    bool saw_rsd = false, saw_natural = false;
    for (const auto& r : rows) {
      CHECK(r.savings == doctest::Approx(32.0 * d / (r.iteration_factor * r.bits)));
      CHECK(r.bits_fraction == doctest::Approx(r.bits / (32.0 * d)));
      if (r.method.find("Randomized SD") != std::string::npos) {
        saw_rsd = true;
        CHECK(r.savings == doctest::Approx(9.9).epsilon(0.01));
        CHECK(r.iteration_factor == doctest::Approx(1.25));
      }
      if (r.method.find("Natural") != std::string::npos) {
        saw_natural = true;
        CHECK(r.bits == doctest::Approx(9.0 * d));
        CHECK(r.iteration_factor == doctest::Approx(9.0 / 8.0));
        CHECK(r.savings == doctest::Approx(256.0 / 81.0));
      }
      if (r.method == "No compression") CHECK(r.savings == doctest::Approx(1.0));
    }
    CHECK(saw_rsd);
    CHECK(saw_natural);
  }
  CHECK_THROWS_AS(savings_table(10, 0), InvalidArgument);
  CHECK_THROWS_AS(savings_table(10, 11), InvalidArgument);
  CHECK(savings_factor(0.25, 2.0 * 100, 100) == doctest::Approx(32.0 / (1.25 * 2.0)));
}
