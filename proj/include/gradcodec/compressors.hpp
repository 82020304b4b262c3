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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gradcodec/bitio.hpp"
#include "gradcodec/random.hpp"

namespace gradcodec {

/// Operator kinds. The numeric value is the GCV1 container tag.
enum class OperatorKind : std::uint8_t {
  Identity = 0,
  DSD = 1,         // deterministic sparse dithering
  RSD = 2,         // randomized sparse dithering
  SC = 3,          // spherical compression
  TopK = 4,
  RandSparse = 5,  // random-k sparsification, rescaled by d/k
  StdDither = 6,   // uniform-level random dithering with s levels
  Ternary = 7,     // StdDither with s = 1
  Natural = 8,     // stochastic rounding to signed powers of two
};

std::string_view operator_name(OperatorKind kind);
OperatorKind parse_operator_kind(std::string_view name);
/// Throws DecodeError for tags that name no operator.
OperatorKind operator_kind_from_tag(std::uint8_t tag);

struct OperatorConfig {
  OperatorKind kind = OperatorKind::Identity;
  double nu = 0.0;            // DSD, RSD
  double alpha = 0.0;         // SC
  std::size_t k = 0;          // TopK, RandSparse
  std::uint32_t levels = 0;   // StdDither
  std::optional<double> wrap_omega;  // post-scale an unbiased operator by 1/(1+omega)
  std::uint64_t seed = 0;     // base seed; per-message stream is the message index

  static OperatorConfig identity();
  static OperatorConfig dsd(double nu);
  static OperatorConfig rsd(double nu, std::uint64_t seed = 0);
  static OperatorConfig sc(double alpha, std::uint64_t seed = 0);
  static OperatorConfig topk(std::size_t k);
  static OperatorConfig random_sparse(std::size_t k, std::uint64_t seed = 0);
  static OperatorConfig std_dither(std::uint32_t levels, std::uint64_t seed = 0);
  static OperatorConfig ternary(std::uint64_t seed = 0);
  static OperatorConfig natural(std::uint64_t seed = 0);

  OperatorConfig wrapped(double omega) const;
  bool randomized() const;

  /// Throws InvalidArgument when the parameters for `kind` are out of range
  /// for dimension d.
  void validate(std::size_t d) const;

  /// Short human-readable label, e.g. "DSD(nu=0.1)".
  std::string label() const;
};

enum class OperatorClassKind { Unbiased, Contractive, StrictlyContractive };

/// U(omega), B(alpha) or C(alpha) membership with its variance parameter.
struct OperatorClass {
  OperatorClassKind kind;
  double parameter;

  std::string label() const;
};

OperatorClass operator_class(const OperatorConfig& config, std::size_t d);

struct CompressionOutcome {
  std::vector<double> reconstructed;
  std::size_t bits = 0;
  double distortion = 0.0;  // ||C(x) - x||^2 / ||x||^2, 0 when x = 0
};

struct Compressed {
  BitString payload;
  CompressionOutcome outcome;
  std::uint64_t trials = 0;  // SC only: trial count T
};

double squared_norm(std::span<const double> x);
double normalized_distortion(std::span<const double> x, std::span<const double> cx);

/// Fields of a sparse-dithering message: C(x)_i = gamma * s_i * k_i.
struct SdMessage {
  float gamma = 0.0f;
  std::vector<std::size_t> zero_positions;  // n0 of them, increasing
  std::vector<bool> negative;               // sign per nonzero, index order
  std::vector<std::uint64_t> levels;        // k_i >= 1 per nonzero, index order

  std::size_t n0() const { return zero_positions.size(); }
};

/// Layout: [gamma:31][n0: ceil(log2(d+1))][zero positions: ceil(log2 C(d,n0))]
/// [d-n0 sign bits][unary levels].
void append_sd_message(BitString& out, const SdMessage& message, std::size_t d);
SdMessage read_sd_message(BitCursor& cursor, std::size_t d);
std::vector<double> reconstruct_sd(const SdMessage& message, std::size_t d);
/// Exact payload length: 31 + ceil(log2(d+1)) + ceil(log2 C(d,n0)) + (d-n0) + sum k_i.
std::size_t sd_message_bits(const SdMessage& message, std::size_t d);

/// Nearest level k for |u_i| on the grid 2kh; ties round down.
std::uint64_t nearest_level(double magnitude, double h);

Compressed dsd_compress(std::span<const double> x, double nu);
std::vector<double> dsd_decompress(const BitString& bits, std::size_t d);

Compressed rsd_compress(std::span<const double> x, double nu, CounterRng& rng);
std::vector<double> rsd_decompress(const BitString& bits, std::size_t d);

/// Shared-seed identity of one SC message.
struct MessageSeed {
  std::uint64_t seed = 0;
  std::uint64_t message = 0;
};

Compressed sc_compress(std::span<const double> x, double alpha, MessageSeed message_seed);
/// `m_override` replaces the Golomb-Rice parameter derived from P(alpha, d);
/// used only for fault injection.
std::vector<double> sc_decompress(const BitString& bits, std::size_t d, double alpha,
                                  MessageSeed message_seed,
                                  std::optional<unsigned> m_override = std::nullopt);
/// Expected number of SC trials per message, 1 / P(alpha, d).
double sc_expected_trials(double alpha, std::size_t d);
/// Trial cap 50 * ceil(1 / P(alpha, d)).
std::uint64_t sc_trial_cap(double alpha, std::size_t d);
/// Direction x^t / ||x^t|| of SC trial t >= 1; empty when the Gaussian draw is
/// all zeros.
std::vector<double> sc_trial_direction(std::size_t d, MessageSeed message_seed, std::uint64_t t);

Compressed identity_compress(std::span<const double> x);
Compressed topk_compress(std::span<const double> x, std::size_t k);
Compressed random_sparsify(std::span<const double> x, std::size_t k, CounterRng& rng);
Compressed std_dither(std::span<const double> x, std::uint32_t levels, CounterRng& rng);
Compressed ternary(std::span<const double> x, CounterRng& rng);
Compressed natural_compress(std::span<const double> x, CounterRng& rng);

std::vector<double> identity_decompress(const BitString& bits, std::size_t d);
std::vector<double> sparse_values_decompress(const BitString& bits, std::size_t d, std::size_t k);
std::vector<double> std_dither_decompress(const BitString& bits, std::size_t d, std::uint32_t levels);
std::vector<double> natural_decompress(const BitString& bits, std::size_t d);

/// Scales an unbiased operator's output by 1/(1+omega); bits unchanged,
/// distortion recomputed against x.
CompressionOutcome contract_wrap(const CompressionOutcome& outcome, std::span<const double> x,
                                 double omega);

/// Encode with the operator described by `config`; randomized operators draw
/// from CounterRng(config.seed, message_index).
Compressed compress(const OperatorConfig& config, std::span<const double> x,
                    std::uint64_t message_index = 0);

/// Inverse of compress. The payload must be consumed exactly.
std::vector<double> decompress(const OperatorConfig& config, const BitString& payload,
                               std::size_t d, std::uint64_t message_index = 0);

}  // namespace gradcodec
