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

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gradcodec/compressors.hpp"

namespace gradcodec::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIoOrParse = 2, kValidation = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operator flags shared by the subcommands; unset values take per-operator
/// defaults that may depend on d.
struct OperatorFlags {
  std::string op = "dsd";
  std::optional<double> nu;
  std::optional<double> alpha;
  std::optional<std::size_t> k;
  std::optional<std::uint32_t> levels;
  std::optional<double> wrap_omega;
};

OperatorConfig build_config(const OperatorFlags& flags, std::uint64_t seed, std::size_t d);

/// `kind[:key=value[:key=value...]]`, e.g. `rsd:nu=0.25:wrap=0.25` or `topk:k=5`.
OperatorFlags parse_operator_spec(std::string_view spec);

/// Whitespace-separated reals; `#` starts a comment line.
std::vector<double> read_vector_file(const std::filesystem::path& path);
std::vector<double> parse_vector(std::string_view text);

/// Shortest text that reads back to the same double; values that are exact
/// binary32 numbers print at binary32 precision.
std::string format_value(double v);

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

/// Comma-separated list of reals; throws UsageError when empty.
std::vector<double> parse_grid(std::string_view text, std::string_view what);
std::vector<std::size_t> parse_size_grid(std::string_view text, std::string_view what);

/// JSON sidecar describing how a container was produced.
std::string sidecar_json(const OperatorConfig& config, std::size_t d, std::uint64_t message,
                         const Compressed& compressed);
/// Fills decode parameters from a sidecar; flags already set take precedence.
void apply_sidecar(const std::filesystem::path& path, OperatorFlags& flags, std::optional<std::uint64_t>& seed,
                   std::optional<std::uint64_t>& message);

}  // namespace gradcodec::cli
