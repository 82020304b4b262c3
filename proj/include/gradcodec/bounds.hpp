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
#include <string>
#include <vector>

namespace gradcodec {

/// Worst-case bits any B(alpha) operator needs: (d/2) log2(1/alpha).
double up_lower_bound(double alpha, std::size_t d);

/// Expected bits any C(alpha) operator needs: -log2 P(alpha, d).
double avg_lower_bound(double alpha, std::size_t d);

struct BstarEstimate {
  double estimate;  // -log2 P + log2 d + (1/2) log2 log2 d
  double band;      // +- (1/2) log2 log2 d, plus an unspecified O(1)
};

/// Central estimate of b*(alpha, d), the minimal worst-case bits over B(alpha).
/// Requires d >= 3.
BstarEstimate bstar_estimate(double alpha, std::size_t d);

double binary_entropy(double tau);

/// Zero-fraction tau maximizing the sparse-dithering bit coefficient:
/// tau* = 1 / (1 + 2^((6 + 1/sqrt(nu)) / 4)).
double dsd_tau_star(double nu);
/// beta(tau, nu) = H2(tau) + (3/2)(1 - tau) + (1 - tau/2) / (2 sqrt(nu)).
double dsd_beta(double tau, double nu);
/// beta(nu) = beta(tau*(nu), nu).
double dsd_beta(double nu);
/// Worst-case deterministic SD bits: 30 + log2 d + beta(nu) d.
double dsd_predicted_bits(double nu, std::size_t d);

/// log2 3 + 1/(2 sqrt(omega)).
double rsd_bits_per_coordinate(double omega);
/// Expected randomized SD bits: 30 + log2 d + (log2 3 + 1/(2 sqrt(omega))) d.
double rsd_predicted_bits(double omega, std::size_t d);

/// Total-communication savings vs 32-bit floats: 32 d / ((1 + omega) E[bits]).
double savings_factor(double omega, double expected_bits, std::size_t d);

/// (1600 d^2 log2 d)^(2/d); requires d >= 3.
double dimension_factor(std::size_t d);
/// Same with the natural log of d.
double dimension_factor_ln(std::size_t d);

struct SavingsRow {
  std::string method;
  double bits;            // E[b]
  double iteration_factor;  // 1 + omega
  double bits_fraction;   // E[b] / 32d
  double savings;         // 32 d / ((1 + omega) E[b])
};

/// Unbiased-method savings table at dimension d (k for random sparsification).
std::vector<SavingsRow> savings_table(std::size_t d, std::size_t k);

}  // namespace gradcodec
