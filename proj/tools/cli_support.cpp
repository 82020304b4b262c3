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

#include "cli_support.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "gradcodec/error.hpp"
#include "gradcodec/optim.hpp"

namespace gradcodec::cli {

namespace {

double parse_double(std::string_view token, std::string_view what) {
  double v = 0.0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw UsageError("bad value '" + std::string(token) + "' for " + std::string(what));
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view token, std::string_view what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw UsageError("bad value '" + std::string(token) + "' for " + std::string(what));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto at = text.find(sep);
    out.push_back(text.substr(0, at));
    if (at == std::string_view::npos) break;
    text.remove_prefix(at + 1);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

OperatorConfig build_config(const OperatorFlags& flags, std::uint64_t seed, std::size_t d) {
  OperatorConfig c;
  c.kind = parse_operator_kind(flags.op);
  c.seed = seed;
  switch (c.kind) {
    case OperatorKind::DSD: c.nu = flags.nu.value_or(0.1); break;
    case OperatorKind::RSD: c.nu = flags.nu.value_or(0.25); break;
    case OperatorKind::SC: c.alpha = flags.alpha.value_or(0.5); break;
    case OperatorKind::TopK:
    case OperatorKind::RandSparse: c.k = flags.k.value_or(std::max<std::size_t>(1, d / 10)); break;
    case OperatorKind::StdDither:
      c.levels = flags.levels.value_or(
          static_cast<std::uint32_t>(std::max(1.0, std::round(std::sqrt(static_cast<double>(d))))));
      break;
    default: break;
  }
  c.wrap_omega = flags.wrap_omega;
  c.validate(d);
  return c;
}

OperatorFlags parse_operator_spec(std::string_view spec) {
  const auto parts = split(trim(spec), ':');
  OperatorFlags flags;
  flags.op = std::string(parts.front());
  parse_operator_kind(flags.op);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string_view::npos) throw UsageError("expected key=value in '" + std::string(spec) + "'");
    const auto key = parts[i].substr(0, eq);
    const auto value = parts[i].substr(eq + 1);
    if (key == "nu") flags.nu = parse_double(value, key);
    else if (key == "alpha") flags.alpha = parse_double(value, key);
    else if (key == "k") flags.k = parse_unsigned(value, key);
    else if (key == "levels") flags.levels = static_cast<std::uint32_t>(parse_unsigned(value, key));
    else if (key == "wrap") flags.wrap_omega = parse_double(value, key);
    else throw UsageError("unknown operator parameter '" + std::string(key) + "'");
  }
  return flags;
}

std::vector<double> parse_vector(std::string_view text) {
  std::vector<double> out;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    while (!line.empty()) {
      const auto end = line.find_first_of(" \t,");
      auto token = line.substr(0, end);
      line = end == std::string_view::npos ? std::string_view{} : trim(line.substr(end + 1));
      if (token.empty()) continue;
      if (token.front() == '+') token.remove_prefix(1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError("malformed real '" + std::string(token) + "'", line_no);
      }
      out.push_back(v);
    }
  }
  if (out.empty()) throw ParseError("no values in vector file", std::max<std::size_t>(line_no, 1));
  return out;
}

std::vector<double> read_vector_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_vector(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

std::string format_value(double v) {
  char buf[64];
  const float f = static_cast<float>(v);
  if (static_cast<double>(f) == v) {
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, f);
    return std::string(buf, ptr);
  }
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_binary_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<double> parse_grid(std::string_view text, std::string_view what) {
  std::vector<double> out;
  for (auto item : split(text, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item, what));
  }
  if (out.empty()) throw UsageError(std::string(what) + " grid is empty");
  return out;
}

std::vector<std::size_t> parse_size_grid(std::string_view text, std::string_view what) {
  std::vector<std::size_t> out;
  for (auto item : split(text, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_unsigned(item, what));
  }
  if (out.empty()) throw UsageError(std::string(what) + " grid is empty");
  return out;
}

std::string sidecar_json(const OperatorConfig& config, std::size_t d, std::uint64_t message,
                         const Compressed& compressed) {
  nlohmann::json j;
  j["operator"] = std::string(operator_name(config.kind));
  j["label"] = config.label();
  j["d"] = d;
  j["seed"] = config.seed;
  j["message"] = message;
  j["bits"] = compressed.outcome.bits;
  j["distortion"] = compressed.outcome.distortion;
  j["version"] = std::string(toolkit_version());
  switch (config.kind) {
    case OperatorKind::DSD:
    case OperatorKind::RSD: j["nu"] = config.nu; break;
    case OperatorKind::SC:
      j["alpha"] = config.alpha;
      j["trials"] = compressed.trials;
      break;
    case OperatorKind::TopK:
    case OperatorKind::RandSparse: j["k"] = config.k; break;
    case OperatorKind::StdDither: j["levels"] = config.levels; break;
    default: break;
  }
  if (config.wrap_omega) j["wrap_omega"] = *config.wrap_omega;
  return j.dump(2) + "\n";
}

void apply_sidecar(const std::filesystem::path& path, OperatorFlags& flags, std::optional<std::uint64_t>& seed,
                   std::optional<std::uint64_t>& message) {
  std::ifstream in(path);
  if (!in) return;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 1);
  }
  try {
    if (!flags.nu && j.contains("nu")) flags.nu = j["nu"].get<double>();
    if (!flags.alpha && j.contains("alpha")) flags.alpha = j["alpha"].get<double>();
    if (!flags.k && j.contains("k")) flags.k = j["k"].get<std::size_t>();
    if (!flags.levels && j.contains("levels")) flags.levels = j["levels"].get<std::uint32_t>();
    if (!flags.wrap_omega && j.contains("wrap_omega")) flags.wrap_omega = j["wrap_omega"].get<double>();
    if (!seed && j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
    if (!message && j.contains("message")) message = j["message"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 1);
  }
}

}  // namespace gradcodec::cli
