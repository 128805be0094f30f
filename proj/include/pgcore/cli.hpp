// Copyright 2026 The pgcore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. `run` is the whole program minus main(), so tests
// can drive it with captured streams.
//
//   pgcore check      --economy F --point CSV [solver flags] [--json]
//   pgcore pareto     --economy F --point CSV [solver flags] [--json]
//   pgcore lindahl    --economy F --point CSV [--tol R] [--json]
//   pgcore bruteforce --economy F --point CSV [--grid-res N] [--margin R] [--json]
//   pgcore compare    --economy F --point CSV [solver and grid flags] [--json]
//   pgcore validate   --economy F [--samples N] [--seed N] [--json]
//
// Exit status: 0 completed, 1 compare disagreement, 2 bad input or failure.

#ifndef PGCORE_CLI_HPP
#define PGCORE_CLI_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pgcore/coretest.hpp"
#include "pgcore/groundtruth.hpp"

namespace pgcore {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitInputError = 2;

/// Comma-separated decimals ("0.5,1e-1"). Throws kConfigParseError.
Vector parse_point(std::string_view text);

struct CompareResult {
  CoreVerdict verdict;
  /// Gain behind a not-in-core verdict (0 for IN_CORE).
  double algorithm_strength = 0.0;
  Vector witness;
  BruteForceResult oracle;
  Theorem1Result theorem1;
  bool agree = false;
  /// The grid gain lies in (tau_dev, margin], or the algorithm's gain is at
  /// most margin: too close to call at this resolution.
  bool skipped = false;

  bool mismatch() const noexcept { return !skipped && !agree; }
};

CompareResult compare(const UtilityOracle& oracle, const Outcome& a, const SolverConfig& cfg,
                      const GridSpec& grid);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pgcore

#endif  // PGCORE_CLI_HPP
