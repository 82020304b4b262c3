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

#include "gradcodec/data.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "gradcodec/error.hpp"
#include "gradcodec/random.hpp"

namespace gradcodec {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view token, std::size_t line, const char* what) {
  double v = 0.0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw ParseError(std::string("malformed ") + what + " '" + std::string(token) + "'", line);
  }
  return v;
}

struct SparseRow {
  double label;
  std::vector<std::pair<std::size_t, double>> entries;  // 1-based index
};

}  // namespace

Dataset parse_libsvm(std::string_view text, std::string name, std::string source) {
  std::vector<SparseRow> rows;
  std::size_t d = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    SparseRow row{};
    bool first = true;
    std::size_t last_index = 0;
    while (!line.empty()) {
      auto end = line.find_first_of(" \t");
      std::string_view token = line.substr(0, end);
      line = end == std::string_view::npos ? std::string_view{} : trim(line.substr(end));
      if (first) {
        row.label = parse_real(token, line_no, "label");
        first = false;
        continue;
      }
      const auto colon = token.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError("expected idx:val, got '" + std::string(token) + "'", line_no);
      }
      const auto idx_text = token.substr(0, colon);
      std::size_t index = 0;
      const auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), index);
      if (ec != std::errc() || ptr != idx_text.data() + idx_text.size() || index == 0) {
        throw ParseError("malformed feature index '" + std::string(idx_text) + "'", line_no);
      }
      if (index <= last_index) {
        throw ParseError("feature indices must be strictly increasing", line_no);
      }
      last_index = index;
      row.entries.emplace_back(index, parse_real(token.substr(colon + 1), line_no, "feature value"));
      d = std::max(d, index);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty dataset", line_no == 0 ? 1 : line_no);

  Dataset ds;
  ds.name = std::move(name);
  ds.source = std::move(source);
  ds.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  ds.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    ds.labels(static_cast<Eigen::Index>(r)) = rows[r].label;
    for (const auto& [index, value] : rows[r].entries) {
      ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(index - 1)) = value;
    }
  }
  return ds;
}

Dataset load_libsvm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_libsvm(buf.str(), path.stem().string(), path.string());
}

std::string serialize_libsvm(const Dataset& dataset) {
  std::string out;
  char buf[64];
  auto put = [&](double v) {
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
  };
  for (Eigen::Index r = 0; r < dataset.rows(); ++r) {
    put(dataset.labels(r));
    for (Eigen::Index c = 0; c < dataset.dim(); ++c) {
      const double v = dataset.features(r, c);
      if (v == 0.0) continue;
      out.push_back(' ');
      out += std::to_string(c + 1);
      out.push_back(':');
      put(v);
    }
    out.push_back('\n');
  }
  return out;
}

Eigen::VectorXd to_binary_labels(const Eigen::VectorXd& labels) {
  std::set<double> values(labels.data(), labels.data() + labels.size());
  const auto subset_of = [&](std::initializer_list<double> allowed) {
    for (double v : values) {
      if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) return false;
    }
    return true;
  };
  Eigen::VectorXd out = labels;
  if (subset_of({-1.0, 1.0})) return out;
  if (subset_of({0.0, 1.0})) {
    for (auto& v : out) v = v == 0.0 ? -1.0 : 1.0;
    return out;
  }
  if (subset_of({1.0, 2.0})) {
    for (auto& v : out) v = v == 2.0 ? -1.0 : 1.0;
    return out;
  }
  throw InvalidArgument("labels are not a recognized two-class set");
}

Dataset scale_columns(Dataset dataset) {
  for (Eigen::Index c = 0; c < dataset.dim(); ++c) {
    const double m = dataset.features.col(c).cwiseAbs().maxCoeff();
    if (m > 0.0) dataset.features.col(c) /= m;
  }
  dataset.source += " [columns scaled to [-1,1]]";
  return dataset;
}

Eigen::VectorXd synth_planted(std::size_t d, std::uint64_t seed, bool unit) {
  CounterRng rng(seed, 0);
  Eigen::VectorXd w(static_cast<Eigen::Index>(d));
  for (auto& v : w) v = rng.normal();
  if (unit) w.normalize();
  return w;
}

namespace {

Eigen::MatrixXd gaussian_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
  CounterRng rng(seed, 1);
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = rng.normal();
  }
  return a;
}

std::string describe(const char* kind, std::size_t d, std::size_t n, const char* knob, double value,
                     std::uint64_t seed) {
  std::ostringstream s;
  s << "synth:" << kind << ":d=" << d << ",n=" << n << "," << knob << "=" << value << ",seed=" << seed;
  return s.str();
}

}  // namespace

Dataset synth_regression(std::size_t d, std::size_t n, double noise, std::uint64_t seed) {
  if (d < 1 || n < 1) throw InvalidArgument("synthetic data needs d, n >= 1");
  Dataset ds;
  ds.features = gaussian_matrix(n, d, seed);
  ds.labels = ds.features * synth_planted(d, seed, false);
  if (noise != 0.0) {
    CounterRng rng(seed, 2);
    for (auto& v : ds.labels) v += noise * rng.normal();
  }
  ds.source = describe("ridge", d, n, "noise", noise, seed);
  ds.name = "synth-ridge";
  return ds;
}

Dataset synth_classification(std::size_t d, std::size_t n, double margin, std::uint64_t seed) {
  if (d < 1 || n < 1) throw InvalidArgument("synthetic data needs d, n >= 1");
  Dataset ds;
  ds.features = gaussian_matrix(n, d, seed);
  const Eigen::VectorXd w = synth_planted(d, seed, true);
  ds.labels.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index r = 0; r < ds.features.rows(); ++r) {
    const double y = ds.features.row(r).dot(w) >= 0.0 ? 1.0 : -1.0;
    ds.labels(r) = y;
    ds.features.row(r) += (margin * y) * w.transpose();
  }
  ds.source = describe("logistic", d, n, "margin", margin, seed);
  ds.name = "synth-logistic";
  return ds;
}

std::map<std::string, std::filesystem::path> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest '" + path.string() + "'");
  std::map<std::string, std::filesystem::path> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream fields{std::string(t)};
    std::string name;
    std::string file;
    if (!(fields >> name >> file)) throw ParseError("expected 'name path'", line_no);
    std::filesystem::path p(file);
    if (p.is_relative()) p = path.parent_path() / p;
    out[name] = p;
  }
  return out;
}

Dataset resolve_dataset(std::string_view spec,
                        const std::map<std::string, std::filesystem::path>& manifest) {
  constexpr std::string_view kPrefix = "synth:";
  if (spec.substr(0, kPrefix.size()) == kPrefix) {
    std::string_view rest = spec.substr(kPrefix.size());
    const auto colon = rest.find(':');
    const std::string kind(rest.substr(0, colon));
    std::size_t d = 50;
    std::size_t n = 200;
    double noise = 0.1;
    double margin = 0.1;
    std::uint64_t seed = 7;
    if (colon != std::string_view::npos) {
      std::string params(rest.substr(colon + 1));
      std::istringstream items(params);
      std::string item;
      while (std::getline(items, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidArgument("bad synthetic parameter '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        try {
          if (key == "d") d = std::stoul(value);
          else if (key == "n") n = std::stoul(value);
          else if (key == "noise") noise = std::stod(value);
          else if (key == "margin") margin = std::stod(value);
          else if (key == "seed") seed = std::stoull(value);
          else throw InvalidArgument("unknown synthetic parameter '" + key + "'");
        } catch (const std::logic_error&) {
          throw InvalidArgument("bad synthetic parameter '" + item + "'");
        }
      }
    }
    if (kind == "ridge") return synth_regression(d, n, noise, seed);
    if (kind == "logistic") return synth_classification(d, n, margin, seed);
    throw InvalidArgument("unknown synthetic kind '" + kind + "' (expected ridge or logistic)");
  }
  const auto it = manifest.find(std::string(spec));
  if (it != manifest.end()) {
    auto ds = load_libsvm(it->second);
    ds.name = it->first;
    return ds;
  }
  return load_libsvm(std::filesystem::path(spec));
}

}  // namespace gradcodec
