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

#include "gradcodec/optim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "gradcodec/error.hpp"
#include "gradcodec/random.hpp"

#ifndef GRADCODEC_VERSION
#define GRADCODEC_VERSION "unknown"
#endif

namespace gradcodec {

namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_dim(const Problem& problem, const Eigen::VectorXd& x) {
  if (x.size() != problem.dim()) {
    throw InvalidArgument("point has dimension " + std::to_string(x.size()) + ", problem has " +
                          std::to_string(problem.dim()));
  }
}

void check_problem(const Problem& problem) {
  if (problem.samples() < 1 || problem.dim() < 1) throw InvalidArgument("problem has no data");
  if (problem.labels.size() != problem.samples()) {
    throw InvalidArgument("label count does not match the number of rows");
  }
  if (!(problem.lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
}

Problem make_problem(const Dataset& data, std::optional<double> lambda, LossKind kind) {
  Problem p;
  p.features = data.features;
  p.labels = kind == LossKind::Logistic ? to_binary_labels(data.labels) : data.labels;
  p.kind = kind;
  p.lambda = lambda ? *lambda : 1.0 / static_cast<double>(data.rows());
  check_problem(p);
  return p;
}

}  // namespace

Problem Problem::ridge(const Dataset& data, std::optional<double> lambda) {
  return make_problem(data, lambda, LossKind::Ridge);
}

Problem Problem::logistic(const Dataset& data, std::optional<double> lambda) {
  return make_problem(data, lambda, LossKind::Logistic);
}

double loss(const Problem& problem, const Eigen::VectorXd& x) {
  check_dim(problem, x);
  const double n = static_cast<double>(problem.samples());
  const double reg = 0.5 * problem.lambda * x.squaredNorm();
  if (problem.kind == LossKind::Ridge) {
    return (problem.features * x - problem.labels).squaredNorm() / (2.0 * n) + reg;
  }
  const Eigen::VectorXd margins = problem.labels.cwiseProduct(problem.features * x);
  double sum = 0.0;
  for (double m : margins) sum += softplus(-m);
  return sum / n + reg;
}

Eigen::VectorXd gradient(const Problem& problem, const Eigen::VectorXd& x) {
  check_dim(problem, x);
  const double n = static_cast<double>(problem.samples());
  if (problem.kind == LossKind::Ridge) {
    return problem.features.transpose() * (problem.features * x - problem.labels) / n + problem.lambda * x;
  }
  const Eigen::VectorXd margins = problem.labels.cwiseProduct(problem.features * x);
  Eigen::VectorXd weights(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    weights(i) = -problem.labels(i) * sigmoid(-margins(i));
  }
  return problem.features.transpose() * weights / n + problem.lambda * x;
}

double gram_spectral_norm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  CounterRng rng(0x9e3779b97f4a7c15ull, 0);
  Eigen::VectorXd v(a.cols());
  for (auto& c : v) c = rng.normal();
  v.normalize();
  double previous = 0.0;
  for (int step = 0; step < 10'000; ++step) {
    Eigen::VectorXd w = a.transpose() * (a * v);
    const double rayleigh = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (step > 0 && std::fabs(rayleigh - previous) <= 1e-8 * std::fabs(rayleigh)) return rayleigh;
    previous = rayleigh;
  }
  throw NumericalError("power iteration did not converge in 10000 steps");
}

double smoothness(const Problem& problem) {
  check_problem(problem);
  const double n = static_cast<double>(problem.samples());
  const double top = gram_spectral_norm(problem.features);
  return problem.kind == LossKind::Ridge ? top / n + problem.lambda : top / (4.0 * n) + problem.lambda;
}

Eigen::VectorXd minimizer(const Problem& problem) {
  check_problem(problem);
  if (!(problem.lambda > 0.0)) throw InvalidArgument("minimizer requires lambda > 0");
  const double n = static_cast<double>(problem.samples());
  const auto d = problem.dim();
  const Eigen::MatrixXd& a = problem.features;
  if (problem.kind == LossKind::Ridge) {
    Eigen::MatrixXd h = a.transpose() * a / n;
    h.diagonal().array() += problem.lambda;
    const Eigen::LDLT<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) throw NumericalError("ridge normal equations are singular");
    return solver.solve(a.transpose() * problem.labels / n);
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::VectorXd g = gradient(problem, x);
    if (g.norm() <= 1e-10) return x;
    const Eigen::VectorXd margins = problem.labels.cwiseProduct(a * x);
    Eigen::VectorXd curvature(margins.size());
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
      const double s = sigmoid(margins(i));
      curvature(i) = s * (1.0 - s);
    }
    Eigen::MatrixXd h = a.transpose() * curvature.asDiagonal() * a / n;
    h.diagonal().array() += problem.lambda;
    const Eigen::VectorXd step = h.llt().solve(-g);
    const double f0 = loss(problem, x);
    const double slope = g.dot(step);
    double t = 1.0;
    while (t > 1e-12 && loss(problem, x + t * step) > f0 + 1e-4 * t * slope) t *= 0.5;
    x += t * step;
  }
  if (gradient(problem, x).norm() <= 1e-10) return x;
  throw NumericalError("Newton iteration for the logistic minimizer did not converge");
}

Benchmark Benchmark::prepare(Problem problem, std::string source) {
  Benchmark b;
  b.smoothness = gradcodec::smoothness(problem);
  b.optimum = minimizer(problem);
  b.problem = std::move(problem);
  b.source = std::move(source);
  return b;
}

std::string_view status_name(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIterations: return "max-iterations";
    case RunStatus::Diverged: return "diverged";
  }
  return "unknown";
}

std::string_view toolkit_version() { return GRADCODEC_VERSION; }

void RunTrace::write_csv(std::ostream& out) const {
  for (const auto& [key, value] : metadata) out << "# " << key << '=' << value << '\n';
  out << "# status=" << status_name(status) << '\n';
  out << "t,bits,rel_err,distortion\n";
  const auto precision = out.precision(17);
  for (const auto& r : rows) {
    out << r.iteration << ',' << r.bits << ',' << r.rel_err << ',' << r.distortion << '\n';
  }
  out.precision(precision);
}

namespace {

std::string format_real(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

RunTrace cgd_run(const Benchmark& bench, const OperatorConfig& config, const CgdOptions& options) {
  const Problem& problem = bench.problem;
  const auto d = static_cast<std::size_t>(problem.dim());
  config.validate(d);
  if (!(bench.smoothness > 0.0)) throw InvalidArgument("smoothness constant must be positive");
  if (bench.optimum.size() != problem.dim()) throw InvalidArgument("optimum has the wrong dimension");

  RunTrace trace;
  trace.metadata = {
      {"operator", config.label()},
      {"operator_kind", std::string(operator_name(config.kind))},
      {"seed", std::to_string(config.seed)},
      {"problem", problem.kind == LossKind::Ridge ? "ridge" : "logistic"},
      {"dataset", bench.source},
      {"n", std::to_string(problem.samples())},
      {"d", std::to_string(d)},
      {"lambda", format_real(problem.lambda)},
      {"L", format_real(bench.smoothness)},
      {"eps", format_real(options.eps)},
      {"max_iter", std::to_string(options.max_iter)},
      {"x0", "0"},
      {"version", std::string(toolkit_version())},
  };

  Eigen::VectorXd x = Eigen::VectorXd::Zero(problem.dim());
  const double denom = (x - bench.optimum).squaredNorm();
  const auto relative = [&](const Eigen::VectorXd& p) {
    return denom == 0.0 ? 0.0 : (p - bench.optimum).squaredNorm() / denom;
  };
  const double step = 1.0 / bench.smoothness;

  trace.rows.push_back({0, 0, relative(x), 0.0});
  std::uint64_t bits = 0;
  for (std::uint64_t t = 0;; ++t) {
    if (trace.rows.back().rel_err <= options.eps) {
      trace.status = RunStatus::Converged;
      break;
    }
    if (t >= options.max_iter) {
      trace.status = RunStatus::MaxIterations;
      break;
    }
    const Eigen::VectorXd g = gradient(problem, x);
    const Compressed c = compress(config, std::span<const double>(g.data(), d), t);
    x -= step * Eigen::Map<const Eigen::VectorXd>(c.outcome.reconstructed.data(), problem.dim());
    bits += c.outcome.bits;
    const double rel = relative(x);
    trace.rows.push_back({t + 1, bits, rel, c.outcome.distortion});
    if (!(rel <= options.divergence)) {
      trace.status = RunStatus::Diverged;
      break;
    }
  }
  trace.final_point = x;
  return trace;
}

std::string_view family_name(SweepFamily family) {
  switch (family) {
    case SweepFamily::TopK: return "topk";
    case SweepFamily::SC: return "sc";
    case SweepFamily::RSD: return "rsd";
    case SweepFamily::DSD: return "dsd";
  }
  return "unknown";
}

SweepFamily parse_family(std::string_view name) {
  for (auto f : {SweepFamily::TopK, SweepFamily::SC, SweepFamily::RSD, SweepFamily::DSD}) {
    if (family_name(f) == name) return f;
  }
  throw InvalidArgument("unknown sweep family '" + std::string(name) + "' (expected topk, sc, rsd or dsd)");
}

double predicted_ratio(SweepFamily family, double parameter) {
  switch (family) {
    case SweepFamily::RSD: return 1.0 + parameter;
    case SweepFamily::DSD: return 1.0 / (1.0 - std::min(parameter, 1.0));
    default: return 1.0 / (1.0 - parameter);
  }
}

OperatorConfig sweep_operator(SweepFamily family, double parameter, std::size_t d, std::uint64_t seed) {
  switch (family) {
    case SweepFamily::TopK: {
      if (!(parameter >= 0.0 && parameter < 1.0)) throw InvalidArgument("Top-k alpha must be in [0, 1)");
      const auto k = static_cast<std::size_t>(std::llround(static_cast<double>(d) * (1.0 - parameter)));
      return OperatorConfig::topk(std::clamp<std::size_t>(k, 1, d));
    }
    case SweepFamily::SC: return OperatorConfig::sc(parameter, seed);
    case SweepFamily::RSD: return OperatorConfig::rsd(parameter, seed).wrapped(parameter);
    case SweepFamily::DSD: return OperatorConfig::dsd(parameter);
  }
  throw InvalidArgument("unknown sweep family");
}

double SweepResult::r_squared() const {
  std::vector<std::pair<double, double>> points;
  for (const auto& r : rows) {
    if (r.converged) points.emplace_back(r.ratio, r.predicted);
  }
  if (points.empty()) return std::numeric_limits<double>::quiet_NaN();
  double mean = 0.0;
  for (const auto& p : points) mean += p.first;
  mean /= static_cast<double>(points.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (const auto& [observed, predicted] : points) {
    ss_res += (observed - predicted) * (observed - predicted);
    ss_tot += (observed - mean) * (observed - mean);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  return 1.0 - ss_res / ss_tot;
}

void SweepResult::write_csv(std::ostream& out) const {
  out << "# family=" << family_name(family) << '\n';
  out << "# gd_iterations=" << gd_iterations << '\n';
  out << "# r_squared=" << r_squared() << '\n';
  out << "# version=" << toolkit_version() << '\n';
  out << "parameter,config,iterations,ratio,predicted,total_bits,converged,note\n";
  const auto precision = out.precision(10);
  for (const auto& r : rows) {
    out << r.parameter << ',' << r.config << ',' << r.iterations << ',' << r.ratio << ',' << r.predicted
        << ',' << r.total_bits << ',' << (r.converged ? 1 : 0) << ',' << r.note << '\n';
  }
  out.precision(precision);
}

namespace {

struct SweepTask {
  std::size_t row;
  OperatorConfig config;
  std::optional<RunTrace> trace;
  std::string error;
};

void run_parallel(std::vector<SweepTask>& tasks, const Benchmark& bench, const CgdOptions& options,
                  unsigned threads) {
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        tasks[i].trace = cgd_run(bench, tasks[i].config, options);
      } catch (const std::exception& e) {
        tasks[i].error = e.what();
      }
    }
  };
  if (threads <= 1 || tasks.size() <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned i = 0; i < std::min<std::size_t>(threads, tasks.size()); ++i) pool.emplace_back(worker);
}

}  // namespace

SweepResult iteration_ratio_sweep(const Benchmark& bench, SweepFamily family, const std::vector<double>& grid,
                                  const SweepOptions& options) {
  if (grid.empty()) throw InvalidArgument("parameter grid is empty");
  const auto d = static_cast<std::size_t>(bench.problem.dim());
  SweepResult result;
  result.family = family;

  const RunTrace gd = cgd_run(bench, OperatorConfig::identity(), options.cgd);
  if (gd.status != RunStatus::Converged) throw NumericalError("reference gradient descent did not converge");
  result.gd_iterations = gd.iterations();

  std::vector<SweepTask> tasks;
  result.rows.resize(grid.size());
  for (std::size_t r = 0; r < grid.size(); ++r) {
    auto& row = result.rows[r];
    row.parameter = grid[r];
    OperatorConfig probe;
    try {
      probe = sweep_operator(family, grid[r], d, options.seed);
      probe.validate(d);
    } catch (const InvalidArgument& e) {
      row.note = e.what();
      continue;
    }
    if (family == SweepFamily::TopK) row.parameter = 1.0 - static_cast<double>(probe.k) / static_cast<double>(d);
    row.config = probe.label();
    row.predicted = predicted_ratio(family, row.parameter);
    if (family == SweepFamily::SC && sc_expected_trials(grid[r], d) > options.max_expected_trials) {
      std::ostringstream note;
      note << "skipped: " << sc_expected_trials(grid[r], d) << " expected trials per message";
      row.note = note.str();
      continue;
    }
    const unsigned repeats = probe.randomized() ? std::max(1u, options.repeats) : 1u;
    for (unsigned s = 0; s < repeats; ++s) {
      tasks.push_back({r, sweep_operator(family, grid[r], d, options.seed + s), std::nullopt, {}});
    }
  }

  const unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  run_parallel(tasks, bench, options.cgd, threads);

  std::vector<unsigned> counts(grid.size(), 0);
  std::vector<bool> failed(grid.size(), false);
  for (const auto& task : tasks) {
    auto& row = result.rows[task.row];
    if (!task.trace) {
      failed[task.row] = true;
      row.note = task.error;
      continue;
    }
    if (task.trace->status != RunStatus::Converged) {
      failed[task.row] = true;
      row.note = std::string(status_name(task.trace->status));
    }
    row.iterations += static_cast<double>(task.trace->iterations());
    row.total_bits += static_cast<double>(task.trace->total_bits());
    ++counts[task.row];
  }
  for (std::size_t r = 0; r < grid.size(); ++r) {
    auto& row = result.rows[r];
    if (counts[r] == 0) continue;
    row.iterations /= counts[r];
    row.total_bits /= counts[r];
    row.ratio = row.iterations / static_cast<double>(std::max<std::uint64_t>(1, result.gd_iterations));
    row.converged = !failed[r];
  }
  return result;
}

}  // namespace gradcodec
