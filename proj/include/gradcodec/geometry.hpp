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
#include <vector>

#include "gradcodec/random.hpp"

namespace gradcodec {

/// Normalized variance `alpha` in (0, 1) and dimension `d` >= 2.
struct CapParams {
  double alpha;
  std::size_t d;

  /// Throws InvalidArgument unless 0 < alpha < 1 and d >= 2.
  static CapParams make(double alpha, std::size_t d);
};

/// Regularized incomplete beta function I_p(a, b), by continued fraction
/// (modified Lentz) with a power series for p near 0 and the reflection
/// I_p(a, b) = 1 - I_{1-p}(b, a) past the CF's convergence point.
double reg_inc_beta(double p, double a, double b);

/// Natural log of I_p(a, b); stays finite when I_p underflows.
double log_reg_inc_beta(double p, double a, double b);

/// ln B(a, b), accurate when one argument is large.
double log_beta(double a, double b);

/// Fraction of the unit sphere in R^d lying within distance sqrt(alpha) of a
/// point at radius sqrt(1 - alpha): P(alpha, d) = I_alpha((d-1)/2, 1/2) / 2.
double cap_probability(const CapParams& params);

/// log2 P(alpha, d); usable at dimensions where P underflows a double.
double log2_cap_probability(const CapParams& params);

/// Uniform point on the unit sphere of R^d (normalized standard normals).
std::vector<double> sample_unit_sphere(std::size_t d, CounterRng& rng);

struct McEstimate {
  double probability;
  double std_error;  // sqrt(p_hat (1 - p_hat) / trials)
  std::size_t hits;
  std::size_t trials;
};

/// Monte-Carlo estimate of P(alpha, d): fraction of uniform unit samples x with
/// ||x - c||^2 <= alpha, c = sqrt(1 - alpha) e_1.
McEstimate mc_cap_probability(const CapParams& params, std::size_t trials, CounterRng& rng);

}  // namespace gradcodec
