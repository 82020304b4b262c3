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
#include <set>
#include <string>
#include <vector>

namespace gradcodec {

struct AcceptanceOptions {
  bool reduced = false;     // selftest scale: fewer messages and trials
  bool allow_long = false;  // attempt cells whose expected SC trial count is enormous
  std::set<int> only;       // criteria to report; empty runs all
  /// Replaces the Golomb-Rice parameter the SC decoder uses (fault injection).
  std::optional<unsigned> sc_rice_override;
  std::uint64_t seed = 0x5eed;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance criteria and prints one PASS/FAIL line per criterion
/// to `out` as each finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& out);

}  // namespace gradcodec
