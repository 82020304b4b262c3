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

#include "gradcodec/bounds.hpp"

#include <cmath>

#include "gradcodec/error.hpp"
#include "gradcodec/geometry.hpp"

namespace gradcodec {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must be in (0, 1)");
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be > 0");
}

double log2_binomial(std::size_t n, std::size_t k) {
  return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) / std::log(2.0);
}

}  // namespace

double up_lower_bound(double alpha, std::size_t d) {
  check_alpha(alpha);
  if (d < 1) throw InvalidArgument("d must be >= 1");
  return 0.5 * static_cast<double>(d) * std::log2(1.0 / alpha);
}

double avg_lower_bound(double alpha, std::size_t d) {
  return -log2_cap_probability(CapParams::make(alpha, d));
}

BstarEstimate bstar_estimate(double alpha, std::size_t d) {
  check_alpha(alpha);
  if (d < 3) throw InvalidArgument("b* estimate requires d >= 3");
  const double log_d = std::log2(static_cast<double>(d));
  const double half_loglog = 0.5 * std::log2(log_d);
  return {avg_lower_bound(alpha, d) + log_d + half_loglog, half_loglog};
}

double binary_entropy(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("entropy argument must be in [0, 1]");
  if (tau == 0.0 || tau == 1.0) return 0.0;
  return -tau * std::log2(tau) - (1.0 - tau) * std::log2(1.0 - tau);
}

double dsd_tau_star(double nu) {
  check_positive(nu, "nu");
  return 1.0 / (1.0 + std::exp2((6.0 + 1.0 / std::sqrt(nu)) / 4.0));
}

double dsd_beta(double tau, double nu) {
  check_positive(nu, "nu");
  return binary_entropy(tau) + 1.5 * (1.0 - tau) + (1.0 - tau / 2.0) / (2.0 * std::sqrt(nu));
}

double dsd_beta(double nu) { return dsd_beta(dsd_tau_star(nu), nu); }

double dsd_predicted_bits(double nu, std::size_t d) {
  if (d < 1) throw InvalidArgument("d must be >= 1");
  return 30.0 + std::log2(static_cast<double>(d)) + dsd_beta(nu) * static_cast<double>(d);
}

double rsd_bits_per_coordinate(double omega) {
  check_positive(omega, "omega");
  return std::log2(3.0) + 1.0 / (2.0 * std::sqrt(omega));
}

double rsd_predicted_bits(double omega, std::size_t d) {
  if (d < 1) throw InvalidArgument("d must be >= 1");
  return 30.0 + std::log2(static_cast<double>(d)) + rsd_bits_per_coordinate(omega) * static_cast<double>(d);
}

double savings_factor(double omega, double expected_bits, std::size_t d) {
  if (!(omega >= 0.0)) throw InvalidArgument("omega must be >= 0");
  check_positive(expected_bits, "expected bits");
  return 32.0 * static_cast<double>(d) / ((1.0 + omega) * expected_bits);
}

double dimension_factor(std::size_t d) {
  if (d < 3) throw InvalidArgument("dimension factor requires d >= 3");
  const double dd = static_cast<double>(d);
  return std::exp(2.0 / dd * std::log(1600.0 * dd * dd * std::log2(dd)));
}

double dimension_factor_ln(std::size_t d) {
  if (d < 3) throw InvalidArgument("dimension factor requires d >= 3");
  const double dd = static_cast<double>(d);
  return std::exp(2.0 / dd * std::log(1600.0 * dd * dd * std::log(dd)));
}

std::vector<SavingsRow> savings_table(std::size_t d, std::size_t k) {
  if (d < 1 || k < 1 || k > d) throw InvalidArgument("savings table requires 1 <= k <= d");
  const double dd = static_cast<double>(d);
  const double kk = static_cast<double>(k);
  std::vector<SavingsRow> rows;
  auto add = [&](std::string name, double bits, double omega) {
    rows.push_back({std::move(name), bits, 1.0 + omega, bits / (32.0 * dd), savings_factor(omega, bits, d)});
  };
  add("No compression", 32.0 * dd, 0.0);
  add("Random sparsification", 32.0 * kk + log2_binomial(d, k), dd / kk - 1.0);
  add("Ternary quantization", dd * std::log2(3.0), std::sqrt(dd) - 1.0);
  add("Standard dithering", 2.8 * dd, 1.0);
  add("Natural compression", 9.0 * dd, 1.0 / 8.0);
  add("Randomized SD (omega=1/4)", rsd_bits_per_coordinate(0.25) * dd, 0.25);
  return rows;
}

}  // namespace gradcodec
