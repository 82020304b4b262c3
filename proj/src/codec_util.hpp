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

#include <cmath>
#include <span>

#include "gradcodec/bitio.hpp"
#include "gradcodec/error.hpp"

namespace gradcodec::detail {

inline void check_finite(std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) throw InvalidArgument("input vector has non-finite entries");
  }
}

/// Euclidean norm with max-abs prescaling so large or tiny entries do not
/// overflow or underflow the sum of squares.
inline double euclidean_norm(std::span<const double> x) {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double v : x) {
    const double t = v / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

inline void expect_end(const BitCursor& cursor) {
  if (!cursor.at_end()) throw DecodeError("trailing bits after message", cursor.position());
}

}  // namespace gradcodec::detail
