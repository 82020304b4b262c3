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

#include "gradcodec/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gradcodec/error.hpp"

namespace gradcodec {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kTolerance = 1e-15;
constexpr double kTiny = 1e-300;

// Bernoulli tail of Stirling's series for ln Gamma(x), x >= 10.
double stirling_tail(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return inv * (1.0 / 12.0 -
                inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
}

// ln Gamma(a) - ln Gamma(a + b) without cancelling two large lgamma values.
double log_gamma_ratio(double a, double b) {
  if (a < 10.0) return std::lgamma(a) - std::lgamma(a + b);
  const double s = a + b;
  return -(a - 0.5) * std::log1p(b / a) - b * std::log(s) + b + stirling_tail(a) - stirling_tail(s);
}

void check_domain(double p, double a, double b) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("incomplete beta requires p in [0, 1]");
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("incomplete beta requires a > 0 and b > 0");
  }
}

// ln of p^a (1-p)^b / B(a, b).
double log_front(double p, double a, double b) {
  return a * std::log(p) + b * std::log1p(-p) - log_beta(a, b);
}

// Continued fraction for I_p(a, b) * a / front, p below (a+1)/(a+b+2).
double beta_cf(double p, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * p / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * p / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * p / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kTolerance) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge");
}

bool use_series(double p, double b) { return p * std::max(1.0, b) < 0.05; }

// sum_{n>=0} (1-b)_n / n! p^n / (a+n), so that I_p(a,b) = p^a sum / B(a,b).
double beta_series(double p, double a, double b) {
  double term = 1.0;
  double sum = 1.0 / a;
  for (int n = 1; n <= kMaxIterations; ++n) {
    term *= (n - b) * p / n;
    const double add = term / (a + n);
    sum += add;
    if (std::fabs(add) < kTolerance * std::fabs(sum)) return sum;
  }
  throw NumericalError("incomplete beta series did not converge");
}

// ln I_p(a,b) for p in (0,1) on the directly evaluated (lower) side.
double log_lower(double p, double a, double b) {
  if (use_series(p, b)) return a * std::log(p) - log_beta(a, b) + std::log(beta_series(p, a, b));
  return log_front(p, a, b) + std::log(beta_cf(p, a, b)) - std::log(a);
}

bool reflect(double p, double a, double b) { return p > (a + 1.0) / (a + b + 2.0); }

}  // namespace

CapParams CapParams::make(double alpha, std::size_t d) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("cap requires alpha in (0, 1)");
  if (d < 2) throw InvalidArgument("cap requires d >= 2");
  return CapParams{alpha, d};
}

double log_beta(double a, double b) {
  if (a < b) std::swap(a, b);
  return std::lgamma(b) + log_gamma_ratio(a, b);
}

double reg_inc_beta(double p, double a, double b) {
  check_domain(p, a, b);
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  if (reflect(p, a, b)) return 1.0 - std::exp(log_lower(1.0 - p, b, a));
  return std::exp(log_lower(p, a, b));
}

double log_reg_inc_beta(double p, double a, double b) {
  check_domain(p, a, b);
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return 0.0;
  if (reflect(p, a, b)) return std::log1p(-std::exp(log_lower(1.0 - p, b, a)));
  return log_lower(p, a, b);
}

double cap_probability(const CapParams& params) {
  const auto checked = CapParams::make(params.alpha, params.d);
  return 0.5 * reg_inc_beta(checked.alpha, 0.5 * static_cast<double>(checked.d - 1), 0.5);
}

double log2_cap_probability(const CapParams& params) {
  const auto checked = CapParams::make(params.alpha, params.d);
  const double ln_i = log_reg_inc_beta(checked.alpha, 0.5 * static_cast<double>(checked.d - 1), 0.5);
  return ln_i / std::numbers::ln2 - 1.0;
}

std::vector<double> sample_unit_sphere(std::size_t d, CounterRng& rng) {
  if (d < 1) throw InvalidArgument("sphere sampling requires d >= 1");
  std::vector<double> v(d);
  for (;;) {
    rng.align_normals();
    double sq = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      sq += x * x;
    }
    if (sq > 0.0) {
      const double inv = 1.0 / std::sqrt(sq);
      for (auto& x : v) x *= inv;
      return v;
    }
  }
}

McEstimate mc_cap_probability(const CapParams& params, std::size_t trials, CounterRng& rng) {
  const auto checked = CapParams::make(params.alpha, params.d);
  if (trials < 1) throw InvalidArgument("Monte-Carlo estimate needs at least one trial");
  const double center = std::sqrt(1.0 - checked.alpha);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto x = sample_unit_sphere(checked.d, rng);
    double dist2 = (x[0] - center) * (x[0] - center);
    for (std::size_t i = 1; i < x.size(); ++i) dist2 += x[i] * x[i];
    if (dist2 <= checked.alpha) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return McEstimate{p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), hits, trials};
}

}  // namespace gradcodec
