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

// gradcodec command-line tool: compress and decompress vectors, tabulate
// bit bounds, benchmark compressed gradient descent and run sweeps.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "gradcodec/acceptance.hpp"
#include "gradcodec/bounds.hpp"
#include "gradcodec/container.hpp"
#include "gradcodec/data.hpp"
#include "gradcodec/error.hpp"
#include "gradcodec/geometry.hpp"
#include "gradcodec/optim.hpp"
#include "gradcodec/report.hpp"

namespace fs = std::filesystem;
using namespace gradcodec;
using namespace gradcodec::cli;

namespace {

struct GlobalFlags {
  std::uint64_t seed = 0;
  CLI::Option* seed_option = nullptr;
  std::string manifest;
};

void add_operator_flags(CLI::App* app, OperatorFlags& flags) {
  app->add_option("--op", flags.op, "Operator: dsd, rsd, sc, topk, randsparse, dither, ternary, natural, identity")
      ->capture_default_str();
  app->add_option("--nu", flags.nu, "Sparse-dithering variance parameter");
  app->add_option("--alpha", flags.alpha, "Spherical-compression variance parameter");
  app->add_option("--k", flags.k, "Kept coordinates for topk and randsparse");
  app->add_option("--levels", flags.levels, "Levels for standard dithering");
  app->add_option("--wrap-omega", flags.wrap_omega, "Scale an unbiased operator by 1/(1+omega)");
}

std::string optional_bound(const std::function<double()>& f) {
  try {
    return format_number(f(), 7);
  } catch (const InvalidArgument& e) {
    return std::string("n/a (") + e.what() + ")";
  }
}

void print_message_report(std::ostream& out, const OperatorConfig& config, std::size_t d,
                          const Compressed& c) {
  const auto cls = operator_class(config, d);
  Table t{{"quantity", "value"}, {}};
  t.rows.push_back({"operator", config.label()});
  t.rows.push_back({"class", cls.label()});
  t.rows.push_back({"d", std::to_string(d)});
  t.rows.push_back({"seed", std::to_string(config.seed)});
  t.rows.push_back({"bits", std::to_string(c.outcome.bits)});
  t.rows.push_back({"bits/coordinate", format_number(static_cast<double>(c.outcome.bits) / static_cast<double>(d))});
  t.rows.push_back({"distortion", format_number(c.outcome.distortion, 8)});
  const double measured = c.outcome.distortion;
  t.rows.push_back({"(d/2)log2(1/distortion)",
                    measured > 0.0 && measured < 1.0 ? format_number(up_lower_bound(measured, d), 7) : "n/a"});
  if (cls.kind != OperatorClassKind::Unbiased && cls.parameter > 0.0 && cls.parameter < 1.0) {
    t.rows.push_back({"(d/2)log2(1/alpha), class alpha", optional_bound([&] { return up_lower_bound(cls.parameter, d); })});
    t.rows.push_back({"-log2 P(alpha,d), class alpha", optional_bound([&] { return avg_lower_bound(cls.parameter, d); })});
  }
  if (config.kind == OperatorKind::DSD) {
    t.rows.push_back({"predicted worst-case DSD bits", format_number(dsd_predicted_bits(config.nu, d), 7)});
  }
  if (config.kind == OperatorKind::RSD) {
    t.rows.push_back({"predicted expected RSD bits", format_number(rsd_predicted_bits(config.nu, d), 7)});
  }
  if (config.kind == OperatorKind::SC) t.rows.push_back({"trials", std::to_string(c.trials)});
  out << t.to_text();
}

int cmd_compress(const GlobalFlags& global, const OperatorFlags& flags, const std::string& input,
                 const std::string& output, std::uint64_t message) {
  const auto x = read_vector_file(input);
  const auto config = build_config(flags, global.seed, x.size());
  const Compressed c = compress(config, x, message);
  MessageContainer box{static_cast<std::uint8_t>(config.kind), static_cast<std::uint32_t>(x.size()), c.payload};
  if (x.size() > 0xffffffffu) throw InvalidArgument("dimension does not fit the container");
  write_binary_file(output, write_container(box));
  write_text_file(output + ".json", sidecar_json(config, x.size(), message, c));
  print_message_report(std::cout, config, x.size(), c);
  std::cout << "wrote " << output << " (" << c.payload.size() << " payload bits) and " << output << ".json\n";
  return kOk;
}

int cmd_decompress(const GlobalFlags& global, OperatorFlags flags, const std::string& input,
                   const std::string& output, std::optional<std::uint64_t> message) {
  const auto bytes = read_binary_file(input);
  const MessageContainer box = read_container(bytes);
  const OperatorKind kind = operator_kind_from_tag(box.tag);
  std::optional<std::uint64_t> seed;
  if (global.seed_option->count() > 0) seed = global.seed;
  apply_sidecar(input + ".json", flags, seed, message);
  flags.op = std::string(operator_name(kind));
  const auto config = build_config(flags, seed.value_or(global.seed), box.dimension);
  const auto v = decompress(config, box.payload, box.dimension, message.value_or(0));

  std::string values;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) values += ' ';
    values += format_value(v[i]);
  }
  values += '\n';
  if (output.empty() || output == "-") {
    std::cout << values;
  } else {
    std::ostringstream file;
    file << "# operator=" << config.label() << "\n# seed=" << config.seed << "\n# message=" << message.value_or(0)
         << "\n# d=" << box.dimension << "\n# version=" << toolkit_version() << "\n"
         << values;
    write_text_file(output, file.str());
  }
  return kOk;
}

int cmd_stats(const GlobalFlags& global, const OperatorFlags& flags, const std::string& input,
              std::uint64_t messages) {
  const auto x = read_vector_file(input);
  const auto config = build_config(flags, global.seed, x.size());
  if (messages <= 1) {
    print_message_report(std::cout, config, x.size(), compress(config, x, 0));
    return kOk;
  }
  double bits = 0.0;
  double distortion = 0.0;
  for (std::uint64_t m = 0; m < messages; ++m) {
    const Compressed c = compress(config, x, m);
    bits += static_cast<double>(c.outcome.bits);
    distortion += c.outcome.distortion;
  }
  const double n = static_cast<double>(messages);
  Table t{{"operator", "messages", "mean_bits", "mean_distortion", "class"}, {}};
  t.rows.push_back({config.label(), std::to_string(messages), format_number(bits / n, 8),
                    format_number(distortion / n, 8), operator_class(config, x.size()).label()});
  std::cout << t.to_text();
  return kOk;
}

std::string render_table(const Table& t, const std::string& format) {
  if (format == "csv") return t.to_csv();
  if (format == "tsv") return t.to_tsv();
  return t.to_text();
}

int cmd_bounds(const std::string& alpha_text, const std::string& d_text, const std::string& format,
               std::size_t sparsify_k, const std::string& out_dir) {
  const auto alphas = parse_grid(alpha_text, "--alpha");
  const auto dims = parse_size_grid(d_text, "--d");
  Table bounds{{"d", "param", "worst_case_lower_bits", "neg_log2_P", "bstar", "bstar_band", "dsd_bits_nu",
                "rsd_bits_omega", "rsd_savings"},
               {}};
  for (std::size_t d : dims) {
    for (double a : alphas) {
      const auto cell = [&](auto f) { return optional_bound(f); };
      std::string bstar = "n/a";
      std::string band = "n/a";
      try {
        const auto b = bstar_estimate(a, d);
        bstar = format_number(b.estimate, 7);
        band = format_number(b.band, 4);
      } catch (const InvalidArgument& e) {
        bstar = std::string("n/a (") + e.what() + ")";
      }
      bounds.rows.push_back({std::to_string(d), format_number(a),
                             cell([&] { return up_lower_bound(a, d); }),
                             cell([&] { return avg_lower_bound(a, d); }), bstar, band,
                             cell([&] { return dsd_predicted_bits(a, d); }),
                             cell([&] { return rsd_predicted_bits(a, d); }),
                             cell([&] { return savings_factor(a, rsd_predicted_bits(a, d), d); })});
    }
  }
  const std::size_t d0 = dims.front();
  const std::size_t k = sparsify_k ? sparsify_k : std::max<std::size_t>(1, d0 / 10);
  Table savings{{"method", "bits", "bits_per_coordinate", "1+omega", "bits_fraction", "savings"}, {}};
  for (const auto& row : savings_table(d0, k)) {
    savings.rows.push_back({row.method, format_number(row.bits, 8),
                            format_number(row.bits / static_cast<double>(d0), 5),
                            format_number(row.iteration_factor, 5), format_number(row.bits_fraction, 4),
                            format_number(row.savings, 4)});
  }
  const std::string first = render_table(bounds, format);
  const std::string second = render_table(savings, format);
  if (!out_dir.empty()) {
    const std::string ext = format == "csv" ? ".csv" : format == "tsv" ? ".tsv" : ".txt";
    write_text_file(fs::path(out_dir) / ("bounds" + ext), first);
    write_text_file(fs::path(out_dir) / ("savings" + ext), second);
  }
  std::cout << first << "\n# savings at d=" << d0 << " (random sparsification k=" << k << ")\n" << second;
  std::cout << "\n# (1600 d^2 log2 d)^(2/d) at d=1000: " << format_number(dimension_factor(1000), 6)
            << " (natural log: " << format_number(dimension_factor_ln(1000), 6) << ")\n";
  return kOk;
}

struct ProblemFlags {
  std::string dataset = "synth:ridge:d=50,n=200,noise=0.1,seed=7";
  std::string problem = "auto";
  bool scale = false;
  double eps = 1e-4;
  std::uint64_t max_iter = 1'000'000;
  std::string out = "gradcodec_out";
  std::string format = "svg";
};

void add_problem_flags(CLI::App* app, ProblemFlags& p) {
  app->add_option("--dataset", p.dataset, "LIBSVM file, manifest name, or synth:ridge|logistic:key=value,...")
      ->capture_default_str();
  app->add_option("--problem", p.problem, "ridge, logistic, or auto (synth kind; files default to ridge)")
      ->check(CLI::IsMember({"auto", "ridge", "logistic"}))
      ->capture_default_str();
  app->add_flag("--scale-columns", p.scale, "Scale each feature column to [-1, 1]");
  app->add_option("--eps", p.eps, "Stop once the relative error is at most eps")->capture_default_str();
  app->add_option("--max-iter", p.max_iter, "Iteration cap per run")->capture_default_str();
  app->add_option("--out", p.out, "Output directory")->capture_default_str();
  app->add_option("--format", p.format, "csv (traces only), svg (traces and plots) or table (print only)")
      ->check(CLI::IsMember({"csv", "svg", "table"}))
      ->capture_default_str();
}

Benchmark load_benchmark(const GlobalFlags& global, const ProblemFlags& p) {
  std::map<std::string, fs::path> manifest;
  if (!global.manifest.empty()) manifest = load_manifest(global.manifest);
  Dataset data = resolve_dataset(p.dataset, manifest);
  if (p.scale) data = scale_columns(std::move(data));
  bool logistic = p.problem == "logistic";
  if (p.problem == "auto") logistic = p.dataset.rfind("synth:logistic", 0) == 0;
  Problem problem = logistic ? Problem::logistic(data) : Problem::ridge(data);
  return Benchmark::prepare(std::move(problem), data.source);
}

std::string slug(std::string s) {
  for (auto& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-') c = '_';
  }
  return s;
}

struct BenchEntry {
  std::string name;
  OperatorConfig config;
  std::optional<RunTrace> trace;
  std::string note;
};

std::vector<std::size_t> topk_candidates(std::size_t d) {
  std::vector<std::size_t> ks;
  if (d <= 200) {
    for (std::size_t k = 1; k <= d; ++k) ks.push_back(k);
    return ks;
  }
  for (double f = 1.0; f < static_cast<double>(d); f *= 1.2) {
    const auto k = static_cast<std::size_t>(f);
    if (ks.empty() || k != ks.back()) ks.push_back(k);
  }
  ks.push_back(d);
  return ks;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn fn) {
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < std::min<std::size_t>(threads, count); ++t) pool.emplace_back(worker);
  worker();
}

int cmd_bench(const GlobalFlags& global, const ProblemFlags& p, const std::vector<std::string>& op_specs,
              bool best_topk, double max_trials) {
  const Benchmark bench = load_benchmark(global, p);
  const std::size_t d = static_cast<std::size_t>(bench.problem.dim());
  CgdOptions cgd;
  cgd.eps = p.eps;
  cgd.max_iter = p.max_iter;

  std::vector<BenchEntry> entries;
  entries.push_back({"Basic", OperatorConfig::identity(), std::nullopt, {}});
  const std::vector<std::string> defaults = {"dsd:nu=0.1", "rsd:nu=0.25", "sc:alpha=0.5", "natural"};
  for (const auto& spec : op_specs.empty() ? defaults : op_specs) {
    const auto config = build_config(parse_operator_spec(spec), global.seed, d);
    entries.push_back({config.label(), config, std::nullopt, {}});
  }
  for (auto& e : entries) {
    if (e.config.kind == OperatorKind::SC && sc_expected_trials(e.config.alpha, d) > max_trials) {
      e.note = "infeasible: " + format_number(sc_expected_trials(e.config.alpha, d), 3) +
               " expected trials per message (raise --max-trials to run)";
    }
  }
  parallel_for(entries.size(), [&](std::size_t i) {
    if (!entries[i].note.empty()) return;
    try {
      entries[i].trace = cgd_run(bench, entries[i].config, cgd);
    } catch (const std::exception& ex) {
      entries[i].note = ex.what();
    }
  });

  if (best_topk) {
    const auto ks = topk_candidates(d);
    std::vector<std::optional<RunTrace>> runs(ks.size());
    parallel_for(ks.size(), [&](std::size_t i) { runs[i] = cgd_run(bench, OperatorConfig::topk(ks[i]), cgd); });
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (runs[i]->status != RunStatus::Converged) continue;
      if (!best || runs[i]->total_bits() < runs[*best]->total_bits()) best = i;
    }
    BenchEntry e{"Best Top-k", OperatorConfig::topk(best ? ks[*best] : d), std::nullopt, {}};
    if (best) {
      e.name = "Best Top-k (k=" + std::to_string(ks[*best]) + ")";
      e.trace = std::move(runs[*best]);
      e.trace->metadata.emplace_back("best_topk_candidates", std::to_string(ks.size()));
    } else {
      e.note = "no Top-k run converged";
    }
    entries.push_back(std::move(e));
  }

  const double basic_bits = entries.front().trace ? static_cast<double>(entries.front().trace->total_bits()) : NAN;
  Table summary{{"operator", "status", "iterations", "total_bits", "total_bytes", "vs_basic"}, {}};
  std::vector<Series> series;
  for (auto& e : entries) {
    if (!e.trace) {
      summary.rows.push_back({e.name, "not run", "-", "-", "-", e.note});
      continue;
    }
    const auto& tr = *e.trace;
    const double bits = static_cast<double>(tr.total_bits());
    summary.rows.push_back({e.name, std::string(status_name(tr.status)), std::to_string(tr.iterations()),
                            std::to_string(tr.total_bits()), format_number(bits / 8.0, 8),
                            format_number(bits / basic_bits, 4)});
    e.trace->metadata.emplace_back("scaled_columns", p.scale ? "1" : "0");
    if (p.format != "table") {
      std::ostringstream csv;
      tr.write_csv(csv);
      write_text_file(fs::path(p.out) / (slug(e.name) + ".csv"), csv.str());
    }
    Series s{e.name, {}, {}};
    for (const auto& row : tr.rows) {
      s.x.push_back(static_cast<double>(row.bits) / 8.0);
      s.y.push_back(row.rel_err);
    }
    series.push_back(std::move(s));
  }
  if (p.format == "svg") {
    ChartSpec chart{"Relative error vs communication (" + bench.source + ")", "cumulative bytes sent",
                    "||x - x*||^2 / ||x0 - x*||^2", false, true};
    write_text_file(fs::path(p.out) / "bench.svg", render_svg(chart, series));
  }
  std::cout << "# dataset=" << bench.source << " d=" << d << " n=" << bench.problem.samples()
            << " L=" << format_number(bench.smoothness, 8) << " eps=" << p.eps << " seed=" << global.seed << "\n";
  std::cout << summary.to_text();
  if (p.format != "table") std::cout << "outputs in " << p.out << "\n";
  return kOk;
}

int cmd_sweep(const GlobalFlags& global, const ProblemFlags& p, const std::string& family_text,
              const std::string& grid_text, unsigned repeats, double max_trials) {
  const auto grid = parse_grid(grid_text, "--grid");
  const SweepFamily family = parse_family(family_text);
  const Benchmark bench = load_benchmark(global, p);
  SweepOptions options;
  options.cgd.eps = p.eps;
  options.cgd.max_iter = p.max_iter;
  options.seed = global.seed;
  options.repeats = repeats;
  options.max_expected_trials = max_trials;
  const SweepResult result = iteration_ratio_sweep(bench, family, grid, options);

  Table t{{"parameter", "operator", "iterations", "ratio", "predicted", "total_bits", "note"}, {}};
  for (const auto& r : result.rows) {
    t.rows.push_back({format_number(r.parameter, 4), r.config, format_number(r.iterations, 6),
                      format_number(r.ratio, 4), format_number(r.predicted, 4), format_number(r.total_bits, 8),
                      r.converged ? "" : r.note.empty() ? "not converged" : r.note});
  }
  const std::string name = "sweep_" + std::string(family_name(family));
  if (p.format != "table") {
    std::ostringstream csv;
    csv << "# dataset=" << bench.source << "\n# seed=" << global.seed << "\n# eps=" << p.eps << "\n";
    result.write_csv(csv);
    write_text_file(fs::path(p.out) / (name + ".csv"), csv.str());
  }
  if (p.format == "svg") {
    const bool unbiased = family == SweepFamily::RSD;
    const std::string xname = unbiased ? "omega" : "alpha";
    Series measured{"measured", {}, {}, false, true};
    Series bits{"total bits", {}, {}, false, true};
    for (const auto& r : result.rows) {
      if (!r.converged) continue;
      measured.x.push_back(r.parameter);
      measured.y.push_back(r.ratio);
      bits.x.push_back(r.parameter);
      bits.y.push_back(r.total_bits);
    }
    Series theory{unbiased ? "Y = 1 + X" : "Y = 1/(1 - X)", {}, {}, true, false};
    const double lo = *std::min_element(grid.begin(), grid.end());
    const double hi = *std::max_element(grid.begin(), grid.end());
    for (int i = 0; i <= 200; ++i) {
      const double x = lo + (hi - lo) * i / 200.0;
      if (!unbiased && x >= 1.0) break;
      theory.x.push_back(x);
      theory.y.push_back(predicted_ratio(family, x));
    }
    write_text_file(fs::path(p.out) / (name + "_ratio.svg"),
                    render_svg({"Iterations relative to GD", xname, "iterations / GD iterations"}, {measured, theory}));
    write_text_file(fs::path(p.out) / (name + "_bits.svg"),
                    render_svg({"Total communication to reach eps", xname, "total bits", false, true}, {bits}));
  }
  std::cout << "# dataset=" << bench.source << " GD iterations=" << result.gd_iterations
            << " R^2 vs theory=" << format_number(result.r_squared(), 4) << "\n";
  std::cout << t.to_text();
  return kOk;
}

int cmd_selftest(bool full, bool allow_long, const std::vector<int>& only, std::optional<unsigned> rice) {
  AcceptanceOptions options;
  options.reduced = !full;
  options.allow_long = allow_long;
  options.only = std::set<int>(only.begin(), only.end());
  options.sc_rice_override = rice;
  const auto results = run_acceptance(options, std::cout);
  const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
  std::cout << (results.size() - static_cast<std::size_t>(failed)) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradcodec: gradient compression operators, bit bounds and compressed gradient descent"};
  app.set_version_flag("--version", std::string(toolkit_version()));
  app.require_subcommand(1);
  GlobalFlags global;
  global.seed_option = app.add_option("--seed", global.seed, "Base seed for randomized operators")
                           ->envname("GRADCODEC_SEED")
                           ->capture_default_str();
  app.add_option("--manifest", global.manifest, "File listing `name path` dataset entries");

  OperatorFlags op_flags;
  std::string input;
  std::string output;
  std::uint64_t message = 0;
  std::optional<std::uint64_t> message_opt;

  auto* compress_cmd = app.add_subcommand("compress", "Compress a vector file into a GCV1 container");
  add_operator_flags(compress_cmd, op_flags);
  compress_cmd->add_option("input", input, "Whitespace-separated reals")->required();
  compress_cmd->add_option("-o,--out", output, "Container path (a .json sidecar is written next to it)")->required();
  compress_cmd->add_option("--message", message, "Message index (selects the random stream)");

  auto* decompress_cmd = app.add_subcommand("decompress", "Decode a GCV1 container to a vector");
  add_operator_flags(decompress_cmd, op_flags);
  decompress_cmd->add_option("input", input, "GCV1 container")->required();
  decompress_cmd->add_option("-o,--out", output, "Vector file ('-' or omitted: stdout)");
  decompress_cmd->add_option("--message", message_opt, "Message index (default from the sidecar, else 0)");

  std::uint64_t messages = 1;
  auto* stats_cmd = app.add_subcommand("stats", "Compress a vector and report bits, distortion and bounds");
  add_operator_flags(stats_cmd, op_flags);
  stats_cmd->add_option("input", input, "Whitespace-separated reals")->required();
  stats_cmd->add_option("--messages", messages, "Average over this many messages");

  std::string alpha_grid = "0.1,0.25,0.5,0.75";
  std::string d_grid = "10,100,1000,10000";
  std::string table_format = "table";
  std::string bounds_out;
  std::size_t sparsify_k = 0;
  auto* bounds_cmd = app.add_subcommand("bounds", "Tabulate bit lower bounds, predicted bits and savings");
  bounds_cmd->add_option("--alpha", alpha_grid, "Grid of alpha (also read as nu and omega)")->capture_default_str();
  bounds_cmd->add_option("--d", d_grid, "Grid of dimensions")->capture_default_str();
  bounds_cmd->add_option("--k", sparsify_k, "k for the random-sparsification savings row (default d/10)");
  bounds_cmd->add_option("--format", table_format, "csv, tsv or table")
      ->check(CLI::IsMember({"csv", "tsv", "table"}))
      ->capture_default_str();
  bounds_cmd->add_option("--out", bounds_out, "Also write the tables to this directory");

  ProblemFlags problem;
  std::vector<std::string> op_specs;
  bool no_topk = false;
  double max_trials = 1e5;
  auto* bench_cmd = app.add_subcommand("bench", "Run compressed gradient descent per operator against Basic");
  add_problem_flags(bench_cmd, problem);
  bench_cmd->add_option("--ops", op_specs, "Operators as kind[:key=value...], e.g. rsd:nu=0.25:wrap=0.25")
      ->delimiter(',');
  bench_cmd->add_flag("--no-best-topk", no_topk, "Skip the search over k for Best Top-k");
  bench_cmd->add_option("--max-trials", max_trials, "Skip SC when expected trials per message exceed this")
      ->capture_default_str();

  std::string family = "topk";
  std::string grid;
  unsigned repeats = 5;
  auto* sweep_cmd = app.add_subcommand("sweep", "Iterations and bits to reach eps across a parameter grid");
  add_problem_flags(sweep_cmd, problem);
  sweep_cmd->add_option("--family", family, "topk (alpha = 1 - k/d), sc (alpha), rsd (omega, wrapped), dsd (nu)")
      ->capture_default_str();
  sweep_cmd->add_option("--grid", grid, "Comma-separated parameter values")->required();
  sweep_cmd->add_option("--repeats", repeats, "Seeds averaged for randomized families")->capture_default_str();
  sweep_cmd->add_option("--max-trials", max_trials, "Skip SC cells above this many expected trials per message")
      ->capture_default_str();

  bool full = false;
  bool allow_long = false;
  std::vector<int> only;
  std::optional<unsigned> rice;
  auto* selftest_cmd = app.add_subcommand("selftest", "Run the acceptance criteria");
  selftest_cmd->add_flag("--full", full, "Full message and trial counts instead of the reduced suite");
  selftest_cmd->add_flag("--allow-long", allow_long, "Attempt SC cells with enormous expected trial counts");
  selftest_cmd->add_option("--only", only, "Criterion numbers to run")->delimiter(',');
  selftest_cmd->add_option("--fault-rice-m", rice, "Decode SC with this Golomb-Rice parameter (fault injection)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*compress_cmd) return cmd_compress(global, op_flags, input, output, message);
    if (*decompress_cmd) return cmd_decompress(global, op_flags, input, output, message_opt);
    if (*stats_cmd) return cmd_stats(global, op_flags, input, messages);
    if (*bounds_cmd) return cmd_bounds(alpha_grid, d_grid, table_format, sparsify_k, bounds_out);
    if (*bench_cmd) return cmd_bench(global, problem, op_specs, !no_topk, max_trials);
    if (*sweep_cmd) return cmd_sweep(global, problem, family, grid, repeats, max_trials);
    if (*selftest_cmd) return cmd_selftest(full, allow_long, only, rice);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kIoOrParse;
  } catch (const DecodeError& e) {
    std::cerr << "decode error: " << e.what() << "\n";
    return kIoOrParse;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kValidation;
  } catch (const Overflow& e) {
    std::cerr << "overflow: " << e.what() << "\n";
    return kValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoOrParse;
  }
  return kUsage;
}
