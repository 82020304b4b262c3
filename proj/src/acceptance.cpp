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

#include "gradcodec/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "gradcodec/bounds.hpp"
#include "gradcodec/compressors.hpp"
#include "gradcodec/data.hpp"
#include "gradcodec/error.hpp"
#include "gradcodec/geometry.hpp"
#include "gradcodec/optim.hpp"
#include "gradcodec/random.hpp"

namespace gradcodec {

namespace {

// Mean bits and mean normalized distortion of one operator configuration,
// gathered for the worst-case lower-bound check.
struct BitsRecord {
  std::string label;
  std::size_t d = 0;
  double mean_bits = 0.0;
  double mean_distortion = 0.0;
};

struct Context {
  const AcceptanceOptions& options;
  std::vector<BitsRecord> records;

  std::size_t scale(std::size_t full, std::size_t reduced) const { return options.reduced ? reduced : full; }
};

struct Verdict {
  bool passed = true;
  std::string detail;
};

std::string fmt(double v, int precision = 5) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

class Accumulator {
 public:
  void add(double bits, double distortion) {
    bits_ += bits;
    distortion_ += distortion;
    ++count_;
  }
  BitsRecord record(std::string label, std::size_t d) const {
    return {std::move(label), d, bits_ / static_cast<double>(count_), distortion_ / static_cast<double>(count_)};
  }

 private:
  double bits_ = 0.0;
  double distortion_ = 0.0;
  std::size_t count_ = 0;
};

// Gaussian vectors over six decades of scale; every tenth is half sparse and
// every 250th is zero.
std::vector<double> test_vector(CounterRng& rng, std::size_t d, std::size_t index) {
  std::vector<double> x(d, 0.0);
  if (index % 250 == 249) return x;
  const double scale = std::pow(10.0, 6.0 * rng.uniform() - 3.0);
  rng.align_normals();
  for (auto& v : x) v = scale * rng.normal();
  if (index % 10 == 9) {
    for (std::size_t i = 0; i < d; i += 2) x[i] = 0.0;
  }
  return x;
}

// Runs fn(0..count-1) across hardware threads; fn must only touch slot i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < std::min<std::size_t>(threads, count); ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> unit_vector(CounterRng& rng, std::size_t d) { return sample_unit_sphere(d, rng); }

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

double sc_alpha_for(std::size_t d) { return d >= 3 ? 1.0 - 1.0 / static_cast<double>(d) : 0.5; }

std::vector<OperatorConfig> roundtrip_configs(std::size_t d, std::uint64_t seed) {
  const std::size_t k = std::max<std::size_t>(1, d / 4);
  const auto levels = static_cast<std::uint32_t>(std::max(1.0, std::round(std::sqrt(static_cast<double>(d)))));
  return {
      OperatorConfig::identity(),
      OperatorConfig::dsd(0.1),
      OperatorConfig::rsd(0.25, seed),
      OperatorConfig::rsd(0.25, seed).wrapped(0.25),
      OperatorConfig::sc(sc_alpha_for(d), seed),
      OperatorConfig::topk(k),
      OperatorConfig::random_sparse(k, seed),
      OperatorConfig::std_dither(levels, seed),
      OperatorConfig::ternary(seed),
      OperatorConfig::natural(seed),
  };
}

Verdict criterion_roundtrip(Context& ctx) {
  Verdict v;
  const std::size_t messages = ctx.scale(1000, 100);
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::string first_failure;
  for (std::size_t d : {2u, 3u, 17u, 256u, 4096u}) {
    for (const auto& config : roundtrip_configs(d, ctx.options.seed)) {
      CounterRng rng(ctx.options.seed ^ 0xc1, d);
      Accumulator acc;
      for (std::size_t i = 0; i < messages; ++i) {
        const auto x = test_vector(rng, d, i);
        std::string problem;
        try {
          const Compressed c = compress(config, x, i);
          std::vector<double> decoded;
          if (config.kind == OperatorKind::SC && ctx.options.sc_rice_override) {
            decoded = sc_decompress(c.payload, d, config.alpha, MessageSeed{config.seed, i},
                                    ctx.options.sc_rice_override);
          } else {
            decoded = decompress(config, c.payload, d, i);
          }
          if (c.outcome.bits != c.payload.size()) problem = "reported bits differ from payload length";
          else if (!same_bits(decoded, c.outcome.reconstructed)) problem = "decoded vector differs";
          acc.add(static_cast<double>(c.outcome.bits), c.outcome.distortion);
        } catch (const std::exception& e) {
          problem = e.what();
        }
        ++checked;
        if (!problem.empty()) {
          if (failures++ == 0) first_failure = config.label() + " d=" + std::to_string(d) + ": " + problem;
        }
      }
      ctx.records.push_back(acc.record(config.label(), d));
    }
  }
  v.passed = failures == 0;
  v.detail = std::to_string(checked) + " messages, " + std::to_string(failures) + " mismatches";
  if (failures) v.detail += "; first: " + first_failure;
  return v;
}

Verdict criterion_dsd_bits(Context& ctx) {
  Verdict v;
  const std::size_t messages = ctx.scale(200, 50);
  std::ostringstream detail;
  for (std::size_t d : {100u, 1000u, 10000u}) {
    const double bound = 30.0 + std::log2(static_cast<double>(d)) + 3.35 * static_cast<double>(d) + 2.0;
    CounterRng rng(ctx.options.seed ^ 0xc2, d);
    Accumulator acc;
    std::size_t max_bits = 0;
    double max_distortion = 0.0;
    for (std::size_t i = 0; i < messages; ++i) {
      const auto x = unit_vector(rng, d);
      const Compressed c = dsd_compress(x, 0.1);
      max_bits = std::max(max_bits, c.outcome.bits);
      max_distortion = std::max(max_distortion, c.outcome.distortion);
      acc.add(static_cast<double>(c.outcome.bits), c.outcome.distortion);
    }
    ctx.records.push_back(acc.record("DSD(nu=0.1)", d));
    const bool ok = static_cast<double>(max_bits) <= bound && max_distortion <= 0.1;
    v.passed = v.passed && ok;
    detail << "d=" << d << " max bits " << max_bits << " <= " << fmt(bound, 7) << ", max distortion "
           << fmt(max_distortion, 4) << (ok ? "" : " VIOLATED") << "; ";
  }
  v.detail = detail.str();
  return v;
}

Verdict criterion_rsd(Context& ctx) {
  Verdict v;
  constexpr std::size_t d = 10000;
  const std::size_t messages = ctx.scale(200, 200);
  CounterRng rng(ctx.options.seed ^ 0xc3, 0);
  const auto x = unit_vector(rng, d);
  std::vector<double> mean(d, 0.0);
  std::vector<double> m2(d, 0.0);  // Welford running sums
  Accumulator acc;
  double bits = 0.0;
  const auto config = OperatorConfig::rsd(0.25, ctx.options.seed);
  for (std::size_t m = 0; m < messages; ++m) {
    const Compressed c = compress(config, x, m);
    bits += static_cast<double>(c.outcome.bits);
    acc.add(static_cast<double>(c.outcome.bits), c.outcome.distortion);
    const double count = static_cast<double>(m + 1);
    for (std::size_t i = 0; i < d; ++i) {
      const double delta = c.outcome.reconstructed[i] - mean[i];
      mean[i] += delta / count;
      m2[i] += delta * (c.outcome.reconstructed[i] - mean[i]);
    }
  }
  ctx.records.push_back(acc.record(config.label(), d));
  const double n = static_cast<double>(messages);
  const double mean_bits = bits / n;
  const double bound = 30.0 + std::log2(static_cast<double>(d)) + 2.585 * static_cast<double>(d);

  std::size_t outside = 0;
  std::size_t degenerate = 0;
  for (std::size_t i = 0; i < d; ++i) {
    const double se = std::sqrt(m2[i] / (n - 1.0) / n);
    if (se == 0.0) ++degenerate;
    if (std::fabs(mean[i] - x[i]) > 4.0 * se) ++outside;
  }
  const double savings = savings_factor(0.25, mean_bits, d);

  const bool bits_ok = mean_bits <= bound;
  const bool unbiased_ok = outside == 0;
  const bool savings_ok = savings >= 9.5;
  v.passed = bits_ok && unbiased_ok && savings_ok;
  v.detail = "mean bits " + fmt(mean_bits, 7) + " <= " + fmt(bound, 7) + (bits_ok ? "" : " VIOLATED") + "; " +
             std::to_string(outside) + "/" + std::to_string(d) + " coordinates outside 4 SE (" +
             std::to_string(degenerate) + " with zero sample variance)" + "; savings " + fmt(savings, 4) +
             (savings_ok ? " >= 9.5" : " < 9.5");
  return v;
}

// Chi-squared goodness of fit of observed trial counts to Geometric(p), with
// roughly equiprobable bins merged until each expects at least 5 counts.
double geometric_fit_pvalue(const std::vector<std::uint64_t>& counts, double p) {
  const double n = static_cast<double>(counts.size());
  const double log_q = std::log1p(-p);
  const auto cdf = [&](double t) { return t <= 0.0 ? 0.0 : -std::expm1(t * log_q); };
  const auto quantile = [&](double u) { return std::max(1.0, std::ceil(std::log1p(-u) / log_q)); };

  constexpr int kBins = 20;
  std::vector<double> upper;  // inclusive upper edges; last bin is open
  for (int j = 1; j < kBins; ++j) {
    const double edge = quantile(static_cast<double>(j) / kBins);
    if (upper.empty() || edge > upper.back()) upper.push_back(edge);
  }
  std::vector<double> expected;
  std::vector<double> observed;
  double prev = 0.0;
  for (double edge : upper) {
    expected.push_back(n * (cdf(edge) - cdf(prev)));
    prev = edge;
  }
  expected.push_back(n * (1.0 - cdf(prev)));
  observed.assign(expected.size(), 0.0);
  for (auto t : counts) {
    const auto it = std::lower_bound(upper.begin(), upper.end(), static_cast<double>(t));
    observed[static_cast<std::size_t>(it - upper.begin())] += 1.0;
  }
  std::vector<double> e2;
  std::vector<double> o2;
  double e_acc = 0.0;
  double o_acc = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    e_acc += expected[i];
    o_acc += observed[i];
    if (e_acc >= 5.0) {
      e2.push_back(e_acc);
      o2.push_back(o_acc);
      e_acc = o_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (e2.empty()) {
      e2.push_back(e_acc);
      o2.push_back(o_acc);
    } else {
      e2.back() += e_acc;
      o2.back() += o_acc;
    }
  }
  if (e2.size() < 2) return 1.0;
  double stat = 0.0;
  for (std::size_t i = 0; i < e2.size(); ++i) stat += (o2[i] - e2[i]) * (o2[i] - e2[i]) / e2[i];
  const boost::math::chi_squared dist(static_cast<double>(e2.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

constexpr double kAlphaGrid[] = {0.3, 0.5, 0.7};
constexpr std::size_t kDimGrid[] = {3, 10, 50};
// Cells whose expected trial count per message exceeds this are not attempted
// unless long runs are allowed.
constexpr double kFeasibleTrials = 1e6;

Verdict criterion_sc_sandwich(Context& ctx) {
  Verdict v;
  const std::size_t messages = ctx.scale(10000, 1000);
  std::ostringstream detail;
  for (double alpha : kAlphaGrid) {
    for (std::size_t d : kDimGrid) {
      const auto params = CapParams::make(alpha, d);
      const double lower = -log2_cap_probability(params);
      const double expected_trials = std::exp2(lower);
      detail << "(" << alpha << "," << d << ") ";
      if (expected_trials > kFeasibleTrials && !ctx.options.allow_long) {
        v.passed = false;
        detail << "FAIL infeasible: " << fmt(expected_trials, 3) << " expected trials/message; ";
        continue;
      }
      const double p = cap_probability(params);
      const std::uint64_t cell_seed = (ctx.options.seed ^ 0xc4) + d * 1000 + static_cast<std::uint64_t>(alpha * 10);
      std::vector<std::uint64_t> trials(messages);
      std::vector<std::size_t> bits(messages);
      std::vector<double> distortion(messages);
      parallel_for(messages, [&](std::size_t m) {
        CounterRng rng(cell_seed, m);
        std::vector<double> x(d);
        for (auto& c : x) c = rng.normal();
        const Compressed c = sc_compress(x, alpha, MessageSeed{ctx.options.seed, m});
        trials[m] = c.trials;
        bits[m] = c.outcome.bits;
        distortion[m] = c.outcome.distortion;
      });
      double payload_bits = 0.0;
      Accumulator acc;
      std::size_t contraction_violations = 0;
      for (std::size_t m = 0; m < messages; ++m) {
        payload_bits += static_cast<double>(bits[m] - kMagnitudeBits);
        acc.add(static_cast<double>(bits[m]), distortion[m]);
        if (!(distortion[m] <= alpha)) ++contraction_violations;
      }
      ctx.records.push_back(acc.record("SC(alpha=" + fmt(alpha) + ")", d));
      const double mean = payload_bits / static_cast<double>(messages);
      const double pvalue = geometric_fit_pvalue(trials, p);
      const bool ok = lower <= mean && mean < lower + 3.0 && contraction_violations == 0 && pvalue >= 1e-3;
      v.passed = v.passed && ok;
      detail << (ok ? "ok" : "FAIL") << " bits " << fmt(mean) << " in [" << fmt(lower) << ", " << fmt(lower + 3.0)
             << "), contraction violations " << contraction_violations << ", chi2 p " << fmt(pvalue, 3) << "; ";
    }
  }
  v.detail = detail.str();
  return v;
}

Verdict criterion_cap_oracle(Context& ctx) {
  Verdict v;
  const std::size_t trials = ctx.scale(1'000'000, 100'000);
  std::ostringstream detail;
  for (double alpha : kAlphaGrid) {
    for (std::size_t d : kDimGrid) {
      const auto params = CapParams::make(alpha, d);
      const double p = cap_probability(params);
      CounterRng rng(ctx.options.seed ^ 0xc5, d * 1000 + static_cast<std::size_t>(alpha * 10));
      const McEstimate mc = mc_cap_probability(params, trials, rng);
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
      const double z = se > 0.0 ? std::fabs(mc.probability - p) / se : 0.0;
      const bool ok = std::fabs(mc.probability - p) <= 4.0 * se;
      v.passed = v.passed && ok;
      if (!ok) detail << "(" << alpha << "," << d << ") off by " << fmt(z, 3) << " SE; ";
    }
  }
  const double p3 = cap_probability(CapParams::make(0.5, 3));
  const double p2 = cap_probability(CapParams::make(0.5, 2));
  const double want3 = 0.5 * (1.0 - std::sqrt(0.5));
  const bool closed = std::fabs(p3 - want3) <= 1e-9 && std::fabs(p2 - 0.25) <= 1e-9;
  v.passed = v.passed && closed;
  detail << "9 cells within 4 SE" << (v.passed ? "" : " (see above)") << "; P(0.5,3) err "
         << fmt(std::fabs(p3 - want3), 2) << ", P(0.5,2) err " << fmt(std::fabs(p2 - 0.25), 2);
  v.detail = detail.str();
  return v;
}

Verdict criterion_worst_case_bound(Context& ctx) {
  Verdict v;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::ostringstream violations;
  for (const auto& r : ctx.records) {
    if (!(r.mean_distortion > 0.0)) {
      ++skipped;
      continue;
    }
    ++checked;
    const double bound = r.mean_distortion >= 1.0 ? 0.0 : up_lower_bound(r.mean_distortion, r.d);
    if (r.mean_bits < bound) {
      v.passed = false;
      violations << r.label << " d=" << r.d << ": " << fmt(r.mean_bits) << " < " << fmt(bound) << "; ";
    }
  }
  if (checked == 0) v.passed = false;
  v.detail = std::to_string(checked) + " configurations checked, " + std::to_string(skipped) +
             " with zero distortion skipped" + (v.passed ? "" : "; " + violations.str());
  return v;
}

Dataset ridge_data() { return resolve_dataset("synth:ridge:d=50,n=200,noise=0.1,seed=7"); }
Dataset logistic_data() { return resolve_dataset("synth:logistic:d=50,n=200,margin=0.1,seed=7"); }

Verdict criterion_iteration_laws(Context& ctx) {
  Verdict v;
  const auto data = ridge_data();
  const Benchmark bench = Benchmark::prepare(Problem::ridge(data), data.source);
  SweepOptions options;
  options.seed = ctx.options.seed;
  options.repeats = static_cast<unsigned>(ctx.scale(5, 3));

  const auto topk = iteration_ratio_sweep(bench, SweepFamily::TopK,
                                          {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}, options);
  const auto rsd = iteration_ratio_sweep(bench, SweepFamily::RSD, {0.05, 0.1, 0.25, 0.5, 1.0}, options);
  const double r2_topk = topk.r_squared();
  const double r2_rsd = rsd.r_squared();
  const auto all_converged = [](const SweepResult& r) {
    return std::all_of(r.rows.begin(), r.rows.end(), [](const SweepRow& row) { return row.converged; });
  };
  const bool topk_ok = r2_topk >= 0.9 && all_converged(topk);
  const bool rsd_ok = r2_rsd >= 0.9 && all_converged(rsd);
  v.passed = topk_ok && rsd_ok;
  std::ostringstream detail;
  detail << "GD " << topk.gd_iterations << " iterations; Top-k R^2 " << fmt(r2_topk, 4) << (topk_ok ? " >= " : " < ")
         << "0.9 (ratios";
  for (const auto& r : topk.rows) detail << ' ' << fmt(r.ratio, 3);
  detail << "); wrapped RSD R^2 " << fmt(r2_rsd, 4) << (rsd_ok ? " >= " : " < ") << "0.9 (ratios";
  for (const auto& r : rsd.rows) detail << ' ' << fmt(r.ratio, 3);
  detail << ")";
  v.detail = detail.str();
  return v;
}

Verdict criterion_bits_ordering(Context& ctx) {
  Verdict v;
  std::ostringstream detail;
  CgdOptions cgd;
  const auto run_problem = [&](const char* name, const Benchmark& bench) {
    const std::size_t d = static_cast<std::size_t>(bench.problem.dim());
    const RunTrace basic = cgd_run(bench, OperatorConfig::identity(), cgd);
    const double basic_bits = 32.0 * static_cast<double>(d) * static_cast<double>(basic.iterations());
    detail << name << ": Basic " << fmt(basic_bits, 7) << " bits";
    const std::vector<OperatorConfig> configs = {OperatorConfig::dsd(0.1), OperatorConfig::rsd(0.25, ctx.options.seed),
                                                 OperatorConfig::sc(0.5, ctx.options.seed)};
    for (const auto& config : configs) {
      detail << ", " << config.label() << ' ';
      if (config.kind == OperatorKind::SC && sc_expected_trials(config.alpha, d) > kFeasibleTrials &&
          !ctx.options.allow_long) {
        v.passed = false;
        detail << "FAIL infeasible (" << fmt(sc_expected_trials(config.alpha, d), 3) << " trials/message)";
        continue;
      }
      const RunTrace trace = cgd_run(bench, config, cgd);
      const bool ok = trace.status == RunStatus::Converged && static_cast<double>(trace.total_bits()) < basic_bits;
      v.passed = v.passed && ok;
      detail << trace.total_bits() << (ok ? " ok" : " FAIL") << " (" << trace.iterations() << " it)";
    }
    detail << "; ";
  };
  const auto ridge = ridge_data();
  run_problem("ridge", Benchmark::prepare(Problem::ridge(ridge), ridge.source));
  const auto logistic = logistic_data();
  run_problem("logistic", Benchmark::prepare(Problem::logistic(logistic), logistic.source));
  v.detail = detail.str();
  return v;
}

Verdict criterion_gradients(Context& ctx) {
  Verdict v;
  CounterRng rng(ctx.options.seed ^ 0xc9, 0);
  double worst_fd = 0.0;
  std::vector<Problem> lipschitz_set;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t d = 2 + rng.below(19);
    const std::size_t n = d + rng.below(41);
    const auto seed = ctx.options.seed + static_cast<std::uint64_t>(inst);
    const Problem problem = inst % 2 == 0 ? Problem::ridge(synth_regression(d, n, 0.5, seed))
                                          : Problem::logistic(synth_classification(d, n, 0.2, seed));
    Eigen::VectorXd x(static_cast<Eigen::Index>(d));
    for (auto& c : x) c = rng.normal();
    const Eigen::VectorXd g = gradient(problem, x);
    Eigen::VectorXd fd(g.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double h = 1e-5 * std::max(1.0, std::fabs(x(i)));
      Eigen::VectorXd xp = x;
      Eigen::VectorXd xm = x;
      xp(i) += h;
      xm(i) -= h;
      fd(i) = (loss(problem, xp) - loss(problem, xm)) / (2.0 * h);
    }
    worst_fd = std::max(worst_fd, (fd - g).norm() / std::max(g.norm(), 1e-300));
    if (inst < 10) lipschitz_set.push_back(problem);
  }
  double worst_ratio = 0.0;
  for (const auto& problem : lipschitz_set) {
    const double l = smoothness(problem);
    for (int pair = 0; pair < 100; ++pair) {
      Eigen::VectorXd x(problem.dim());
      Eigen::VectorXd y(problem.dim());
      const double spread = std::pow(10.0, 4.0 * rng.uniform() - 2.0);
      for (auto& c : x) c = spread * rng.normal();
      for (auto& c : y) c = spread * rng.normal();
      const double lhs = (gradient(problem, x) - gradient(problem, y)).norm();
      worst_ratio = std::max(worst_ratio, lhs / (l * (x - y).norm()));
    }
  }
  v.passed = worst_fd <= 1e-5 && worst_ratio <= 1.0;
  v.detail = "worst finite-difference relative error " + fmt(worst_fd, 3) + " (<= 1e-5) over 100 instances; " +
             "worst ||grad diff|| / (L ||x - y||) " + fmt(worst_ratio, 6) + " (<= 1) over 1000 pairs";
  return v;
}

Verdict criterion_dimension_factor(Context&) {
  Verdict v;
  const double rhs = dimension_factor(1000);
  v.passed = rhs >= 1.04 && rhs <= 1.06;
  v.detail = "(1600 d^2 log2 d)^(2/d) at d=1000 = " + fmt(rhs, 6) + " (natural-log variant " +
             fmt(dimension_factor_ln(1000), 6) + "), required in [1.04, 1.06]";
  return v;
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;  // at full scale
  std::function<Verdict(Context&)> run;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& out) {
  const std::vector<Criterion> criteria = {
      {1, "round-trip exactness for every operator", 60, criterion_roundtrip},
      {2, "deterministic SD worst-case bits and distortion", 60, criterion_dsd_bits},
      {3, "randomized SD bits, unbiasedness and savings", 120, criterion_rsd},
      {4, "spherical compression bits sandwich, contraction and trial law", 180, criterion_sc_sandwich},
      {5, "cap probability against Monte Carlo and closed forms", 120, criterion_cap_oracle},
      {6, "measured bits respect the worst-case lower bound", 0, criterion_worst_case_bound},
      {7, "iteration ratio laws on synthetic ridge", 300, criterion_iteration_laws},
      {8, "compressed runs beat the 32d-bit baseline", 120, criterion_bits_ordering},
      {9, "gradients and smoothness constants", 60, criterion_gradients},
      {10, "dimension constant at d = 1000", 1, criterion_dimension_factor},
  };
  const auto selected = [&](int id) { return options.only.empty() || options.only.count(id) > 0; };
  // The lower-bound check reads the configurations measured by criteria 1-4.
  const auto needed = [&](int id) { return selected(id) || (id <= 4 && selected(6)); };

  Context ctx{options, {}};
  std::vector<CriterionResult> results;
  for (const auto& c : criteria) {
    if (!needed(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict verdict;
    try {
      verdict = c.run(ctx);
    } catch (const std::exception& e) {
      verdict = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!options.reduced && c.id != 6 && seconds > c.budget_seconds) {
      verdict.passed = false;
      verdict.detail += "; runtime " + fmt(seconds, 4) + " s exceeds " + fmt(c.budget_seconds) + " s";
    }
    if (!selected(c.id)) continue;
    CriterionResult r{c.id, c.title, verdict.passed, verdict.detail, seconds};
    out << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << " (" << fmt(seconds, 3)
        << " s): " << r.detail << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace gradcodec
