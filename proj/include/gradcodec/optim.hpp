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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gradcodec/compressors.hpp"
#include "gradcodec/data.hpp"

namespace gradcodec {

enum class LossKind { Ridge, Logistic };

// Ridge:    f(x) = (1/2n) ||Ax - y||^2 + (lambda/2) ||x||^2
// Logistic: f(x) = (1/n) sum log(1 + exp(-y_i a_i.x)) + (lambda/2) ||x||^2
struct Problem {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;
  double lambda = 0.0;
  LossKind kind = LossKind::Ridge;

  /// lambda defaults to 1/n.
  static Problem ridge(const Dataset& data, std::optional<double> lambda = std::nullopt);
  /// Labels are mapped onto {-1, +1}; other label sets throw InvalidArgument.
  static Problem logistic(const Dataset& data, std::optional<double> lambda = std::nullopt);

  Eigen::Index samples() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
};

double loss(const Problem& problem, const Eigen::VectorXd& x);
Eigen::VectorXd gradient(const Problem& problem, const Eigen::VectorXd& x);

/// Largest eigenvalue of A^T A by power iteration, relative tolerance 1e-8.
/// Throws NumericalError after 1e4 steps without convergence.
double gram_spectral_norm(const Eigen::MatrixXd& a);

/// Ridge: lambda_max(A^T A)/n + lambda. Logistic: lambda_max(A^T A)/(4n) + lambda.
double smoothness(const Problem& problem);

/// Ridge by a direct solve of (A^T A/n + lambda I) x = A^T y / n. Logistic by
/// damped Newton until ||grad f|| <= 1e-10.
Eigen::VectorXd minimizer(const Problem& problem);

/// A problem together with its smoothness constant and minimizer.
struct Benchmark {
  Problem problem;
  double smoothness = 0.0;
  Eigen::VectorXd optimum;
  std::string source;

  static Benchmark prepare(Problem problem, std::string source = {});
};

enum class RunStatus { Converged, MaxIterations, Diverged };
std::string_view status_name(RunStatus status);

/// Toolkit version recorded in output metadata.
std::string_view toolkit_version();

struct TraceRow {
  std::uint64_t iteration = 0;
  std::uint64_t bits = 0;      // cumulative
  double rel_err = 1.0;        // ||x^t - x*||^2 / ||x^0 - x*||^2
  double distortion = 0.0;     // of the step that produced x^t
};

struct RunTrace {
  std::vector<TraceRow> rows;
  RunStatus status = RunStatus::MaxIterations;
  std::vector<std::pair<std::string, std::string>> metadata;
  Eigen::VectorXd final_point;

  std::uint64_t iterations() const { return rows.empty() ? 0 : rows.back().iteration; }
  std::uint64_t total_bits() const { return rows.empty() ? 0 : rows.back().bits; }

  /// `# key=value` metadata lines, then `t,bits,rel_err,distortion`.
  void write_csv(std::ostream& out) const;
};

struct CgdOptions {
  double eps = 1e-4;
  std::uint64_t max_iter = 1'000'000;
  double divergence = 1e12;
};

/// x^{t+1} = x^t - (1/L) C(grad f(x^t)) from x^0 = 0, where the t-th gradient
/// is compressed as message t. Stops once rel_err <= eps.
RunTrace cgd_run(const Benchmark& bench, const OperatorConfig& config, const CgdOptions& options = {});

enum class SweepFamily { TopK, SC, RSD, DSD };
std::string_view family_name(SweepFamily family);
SweepFamily parse_family(std::string_view name);

/// Iteration factor over GD the theory predicts: 1/(1 - alpha) for the
/// contractive families, 1 + omega for wrapped RSD.
double predicted_ratio(SweepFamily family, double parameter);

struct SweepOptions {
  CgdOptions cgd;
  std::uint64_t seed = 0;
  unsigned repeats = 5;           // seeds averaged for randomized families
  double max_expected_trials = 1e5;  // SC cells above this are skipped
  unsigned threads = 0;           // 0 = hardware concurrency
};

struct SweepRow {
  double parameter = 0.0;   // alpha (TopK uses 1 - k/d), or omega
  std::string config;       // operator label
  double iterations = 0.0;  // mean over repeats
  double ratio = 0.0;       // iterations / GD iterations
  double predicted = 0.0;
  double total_bits = 0.0;  // mean over repeats
  bool converged = false;
  std::string note;
};

struct SweepResult {
  SweepFamily family = SweepFamily::TopK;
  std::uint64_t gd_iterations = 0;
  std::vector<SweepRow> rows;

  /// 1 - SS_res / SS_tot of the converged rows against the predicted curve.
  double r_squared() const;
  void write_csv(std::ostream& out) const;
};

/// Operator for one sweep cell. RSD runs RSD(nu = omega) wrapped by 1/(1 + omega).
OperatorConfig sweep_operator(SweepFamily family, double parameter, std::size_t d, std::uint64_t seed);

/// Runs each grid value independently (in parallel) and compares its iteration
/// count with the identity-operator run.
SweepResult iteration_ratio_sweep(const Benchmark& bench, SweepFamily family,
                                  const std::vector<double>& grid, const SweepOptions& options = {});

}  // namespace gradcodec
