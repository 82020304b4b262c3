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

#include "gradcodec/compressors.hpp"

#include <cmath>
#include <sstream>

#include "gradcodec/error.hpp"

namespace gradcodec {

namespace {

struct NamedKind {
  OperatorKind kind;
  std::string_view name;
};

constexpr NamedKind kNames[] = {
    {OperatorKind::Identity, "identity"},   {OperatorKind::DSD, "dsd"},
    {OperatorKind::RSD, "rsd"},             {OperatorKind::SC, "sc"},
    {OperatorKind::TopK, "topk"},           {OperatorKind::RandSparse, "randsparse"},
    {OperatorKind::StdDither, "dither"},    {OperatorKind::Ternary, "ternary"},
    {OperatorKind::Natural, "natural"},
};

bool unbiased_kind(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Identity:
    case OperatorKind::RSD:
    case OperatorKind::RandSparse:
    case OperatorKind::StdDither:
    case OperatorKind::Ternary:
    case OperatorKind::Natural:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string_view operator_name(OperatorKind kind) {
  for (const auto& n : kNames) {
    if (n.kind == kind) return n.name;
  }
  return "unknown";
}

OperatorKind parse_operator_kind(std::string_view name) {
  for (const auto& n : kNames) {
    if (n.name == name) return n.kind;
  }
  throw InvalidArgument("unknown operator '" + std::string(name) + "'");
}

OperatorKind operator_kind_from_tag(std::uint8_t tag) {
  if (tag > static_cast<std::uint8_t>(OperatorKind::Natural)) {
    throw DecodeError("unknown operator tag " + std::to_string(tag), 0);
  }
  return static_cast<OperatorKind>(tag);
}

OperatorConfig OperatorConfig::identity() { return {}; }

OperatorConfig OperatorConfig::dsd(double nu) {
  OperatorConfig c;
  c.kind = OperatorKind::DSD;
  c.nu = nu;
  return c;
}

OperatorConfig OperatorConfig::rsd(double nu, std::uint64_t seed) {
  OperatorConfig c;
  c.kind = OperatorKind::RSD;
  c.nu = nu;
  c.seed = seed;
  return c;
}

OperatorConfig OperatorConfig::sc(double alpha, std::uint64_t seed) {
  OperatorConfig c;
  c.kind = OperatorKind::SC;
  c.alpha = alpha;
  c.seed = seed;
  return c;
}

OperatorConfig OperatorConfig::topk(std::size_t k) {
  OperatorConfig c;
  c.kind = OperatorKind::TopK;
  c.k = k;
  return c;
}

OperatorConfig OperatorConfig::random_sparse(std::size_t k, std::uint64_t seed) {
  OperatorConfig c;
  c.kind = OperatorKind::RandSparse;
  c.k = k;
  c.seed = seed;
  return c;
}

OperatorConfig OperatorConfig::std_dither(std::uint32_t levels, std::uint64_t seed) {
  OperatorConfig c;
  c.kind = OperatorKind::StdDither;
  c.levels = levels;
  c.seed = seed;
  return c;
}

OperatorConfig OperatorConfig::ternary(std::uint64_t seed) {
  OperatorConfig c;
  c.kind = OperatorKind::Ternary;
  c.seed = seed;
  return c;
}

OperatorConfig OperatorConfig::natural(std::uint64_t seed) {
  OperatorConfig c;
  c.kind = OperatorKind::Natural;
  c.seed = seed;
  return c;
}

OperatorConfig OperatorConfig::wrapped(double omega) const {
  OperatorConfig c = *this;
  c.wrap_omega = omega;
  return c;
}

bool OperatorConfig::randomized() const {
  return kind == OperatorKind::RSD || kind == OperatorKind::SC ||
         kind == OperatorKind::RandSparse || kind == OperatorKind::StdDither ||
         kind == OperatorKind::Ternary || kind == OperatorKind::Natural;
}

void OperatorConfig::validate(std::size_t d) const {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  switch (kind) {
    case OperatorKind::DSD:
    case OperatorKind::RSD:
      if (!(nu > 0.0) || !std::isfinite(nu)) throw InvalidArgument("nu must be > 0");
      break;
    case OperatorKind::SC:
      if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must be in (0, 1)");
      if (d < 2) throw InvalidArgument("spherical compression needs d >= 2");
      break;
    case OperatorKind::TopK:
    case OperatorKind::RandSparse:
      if (k < 1 || k > d) throw InvalidArgument("k must satisfy 1 <= k <= d");
      break;
    case OperatorKind::StdDither:
      if (levels < 1) throw InvalidArgument("levels must be >= 1");
      break;
    default:
      break;
  }
  if (wrap_omega) {
    if (!(*wrap_omega >= 0.0) || !std::isfinite(*wrap_omega)) {
      throw InvalidArgument("wrap omega must be >= 0");
    }
    if (!unbiased_kind(kind)) {
      throw InvalidArgument("contraction wrap applies to unbiased operators only");
    }
  }
}

std::string OperatorConfig::label() const {
  std::ostringstream s;
  switch (kind) {
    case OperatorKind::Identity: s << "Identity"; break;
    case OperatorKind::DSD: s << "DSD(nu=" << nu << ")"; break;
    case OperatorKind::RSD: s << "RSD(nu=" << nu << ")"; break;
    case OperatorKind::SC: s << "SC(alpha=" << alpha << ")"; break;
    case OperatorKind::TopK: s << "TopK(k=" << k << ")"; break;
    case OperatorKind::RandSparse: s << "RandSparse(k=" << k << ")"; break;
    case OperatorKind::StdDither: s << "StdDither(s=" << levels << ")"; break;
    case OperatorKind::Ternary: s << "Ternary"; break;
    case OperatorKind::Natural: s << "Natural"; break;
  }
  if (wrap_omega) s << "/(1+" << *wrap_omega << ")";
  return s.str();
}

std::string OperatorClass::label() const {
  std::ostringstream s;
  switch (kind) {
    case OperatorClassKind::Unbiased: s << "U(" << parameter << ")"; break;
    case OperatorClassKind::Contractive: s << "B(" << parameter << ")"; break;
    case OperatorClassKind::StrictlyContractive: s << "C(" << parameter << ")"; break;
  }
  return s.str();
}

OperatorClass operator_class(const OperatorConfig& config, std::size_t d) {
  config.validate(d);
  const double dd = static_cast<double>(d);
  OperatorClass c{OperatorClassKind::Unbiased, 0.0};
  switch (config.kind) {
    case OperatorKind::Identity: c = {OperatorClassKind::Unbiased, 0.0}; break;
    case OperatorKind::DSD:
      c = {OperatorClassKind::StrictlyContractive, std::min(config.nu, 1.0)};
      break;
    case OperatorKind::RSD: c = {OperatorClassKind::Unbiased, config.nu}; break;
    case OperatorKind::SC: c = {OperatorClassKind::StrictlyContractive, config.alpha}; break;
    case OperatorKind::TopK:
      c = {OperatorClassKind::StrictlyContractive, 1.0 - static_cast<double>(config.k) / dd};
      break;
    case OperatorKind::RandSparse:
      c = {OperatorClassKind::Unbiased, dd / static_cast<double>(config.k) - 1.0};
      break;
    case OperatorKind::StdDither: {
      const double s = config.levels;
      c = {OperatorClassKind::Unbiased, std::min(dd / (s * s), std::sqrt(dd) / s)};
      break;
    }
    case OperatorKind::Ternary: c = {OperatorClassKind::Unbiased, std::sqrt(dd)}; break;
    case OperatorKind::Natural: c = {OperatorClassKind::Unbiased, 1.0 / 8.0}; break;
  }
  if (config.wrap_omega) {
    const double w = *config.wrap_omega;
    c = {OperatorClassKind::Contractive, w / (1.0 + w)};
  }
  return c;
}

double squared_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double normalized_distortion(std::span<const double> x, std::span<const double> cx) {
  const double denom = squared_norm(x);
  if (denom == 0.0) return 0.0;
  double num = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = cx[i] - x[i];
    num += e * e;
  }
  return num / denom;
}

namespace {

std::vector<double> apply_wrap(std::vector<double> v, double omega) {
  const double scale = 1.0 + omega;
  for (auto& x : v) x /= scale;
  return v;
}

}  // namespace

CompressionOutcome contract_wrap(const CompressionOutcome& outcome, std::span<const double> x,
                                 double omega) {
  if (!(omega >= 0.0)) throw InvalidArgument("wrap omega must be >= 0");
  CompressionOutcome wrapped;
  wrapped.reconstructed = apply_wrap(outcome.reconstructed, omega);
  wrapped.bits = outcome.bits;
  wrapped.distortion = normalized_distortion(x, wrapped.reconstructed);
  return wrapped;
}

Compressed compress(const OperatorConfig& config, std::span<const double> x,
                    std::uint64_t message_index) {
  config.validate(x.size());
  CounterRng rng(config.seed, message_index);
  Compressed c;
  switch (config.kind) {
    case OperatorKind::Identity: c = identity_compress(x); break;
    case OperatorKind::DSD: c = dsd_compress(x, config.nu); break;
    case OperatorKind::RSD: c = rsd_compress(x, config.nu, rng); break;
    case OperatorKind::SC:
      c = sc_compress(x, config.alpha, MessageSeed{config.seed, message_index});
      break;
    case OperatorKind::TopK: c = topk_compress(x, config.k); break;
    case OperatorKind::RandSparse: c = random_sparsify(x, config.k, rng); break;
    case OperatorKind::StdDither: c = std_dither(x, config.levels, rng); break;
    case OperatorKind::Ternary: c = ternary(x, rng); break;
    case OperatorKind::Natural: c = natural_compress(x, rng); break;
  }
  if (config.wrap_omega) c.outcome = contract_wrap(c.outcome, x, *config.wrap_omega);
  return c;
}

std::vector<double> decompress(const OperatorConfig& config, const BitString& payload,
                               std::size_t d, std::uint64_t message_index) {
  config.validate(d);
  std::vector<double> v;
  switch (config.kind) {
    case OperatorKind::Identity: v = identity_decompress(payload, d); break;
    case OperatorKind::DSD: v = dsd_decompress(payload, d); break;
    case OperatorKind::RSD: v = rsd_decompress(payload, d); break;
    case OperatorKind::SC:
      v = sc_decompress(payload, d, config.alpha, MessageSeed{config.seed, message_index});
      break;
    case OperatorKind::TopK:
    case OperatorKind::RandSparse: v = sparse_values_decompress(payload, d, config.k); break;
    case OperatorKind::StdDither: v = std_dither_decompress(payload, d, config.levels); break;
    case OperatorKind::Ternary: v = std_dither_decompress(payload, d, 1); break;
    case OperatorKind::Natural: v = natural_decompress(payload, d); break;
  }
  if (config.wrap_omega) v = apply_wrap(std::move(v), *config.wrap_omega);
  return v;
}

}  // namespace gradcodec
