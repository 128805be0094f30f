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

// Grid oracle: exhaustive coalition scans, Pareto and individual
// rationality checks, and dominated-set connectivity by flood fill.

#ifndef PGCORE_GROUNDTRUTH_HPP
#define PGCORE_GROUNDTRUTH_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pgcore/coretest.hpp"
#include "pgcore/economy.hpp"

namespace pgcore {

inline constexpr std::size_t kMaxGridAgents = 5;

/// Axis points k / (resolution - 1), k = 0..resolution-1.
struct GridSpec {
  std::size_t resolution = 21;
  /// Strictness buffer: a grid gain counts only when it exceeds margin.
  double margin = 0.1;

  /// margin = 2 / (resolution - 1)
  static GridSpec with_default_margin(std::size_t resolution);
  double default_margin() const;
  double coordinate(std::size_t k) const;
  /// Throws kInvalidConfig.
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct BruteForceResult {
  bool in_core = true;
  /// First grid deviation (coalitions by size, then lexicographic).
  std::optional<Deviation> deviation;
  /// max over coalitions C and grid points x on C of min_{i in C} u_i(x) - u_i(a).
  double strength = 0.0;
  std::optional<Deviation> strongest;
  std::size_t points_scanned = 0;
};

/// Throws kInstanceTooLarge for n > 5 or an oversized lattice.
BruteForceResult brute_force_core_test(const UtilityOracle& oracle, const Outcome& a,
                                       const GridSpec& grid);

struct ParetoIrResult {
  bool pareto = true;
  bool individually_rational = true;
  /// max over the grid of min_i u_i(x) - u_i(a).
  double pareto_strength = 0.0;
  /// max over agents i and grid points on {i} of u_i(x) - u_i(a).
  double ir_strength = 0.0;
};

ParetoIrResult brute_force_pareto_and_ir(const UtilityOracle& oracle, const Outcome& a,
                                         const GridSpec& grid);

/// Lattice of grid points with u(x) <= u(a) + slack componentwise, plus
/// a's nearest grid point. Linear index: coordinate 0 varies slowest.
struct DominatedSetGrid {
  std::size_t agents = 0;
  std::size_t resolution = 0;
  std::vector<std::uint8_t> membership;
  /// Component id per point, -1 for non-members.
  std::vector<std::int32_t> component_labels;
  std::size_t components = 0;

  std::size_t index_of(const std::vector<std::size_t>& coords) const;
  std::vector<std::size_t> coords_of(std::size_t index) const;
  bool member(const std::vector<std::size_t>& coords) const;
};

DominatedSetGrid build_dominated_set(const UtilityOracle& oracle, const Outcome& a,
                                     const GridSpec& grid, double slack);

struct ConnectivityResult {
  bool connected = true;
  std::size_t components = 0;
  bool zero_is_member = false;
};

/// Flood fill with axis neighbours on the dominated set; slack defaults to
/// grid.margin.
ConnectivityResult dominated_set_connected(const UtilityOracle& oracle, const Outcome& a,
                                           const GridSpec& grid,
                                           std::optional<double> slack = std::nullopt);

enum class Theorem1Outcome { kHolds, kViolated, kSkipped };
std::string_view theorem1_outcome_name(Theorem1Outcome outcome);

/// A clause decided on the grid, with an ambiguity flag when the deciding
/// quantity lies within margin of the threshold.
struct Clause {
  bool value = false;
  bool ambiguous = false;
};

struct Theorem1Result {
  Theorem1Outcome outcome = Theorem1Outcome::kSkipped;
  Clause in_core;
  Clause pareto;
  Clause individually_rational;
  Clause connected;
  double core_strength = 0.0;
  double pareto_strength = 0.0;
  double ir_strength = 0.0;
  std::size_t components = 0;

  bool holds() const noexcept { return outcome == Theorem1Outcome::kHolds; }
};

/// Compares "a is in the core" with "Pareto and IR and D_a connected" on
/// the grid. Gains at or below 1e-9 count as none, gains above margin as
/// decisive, anything between is ambiguous; connectivity is ambiguous when
/// slack margin and slack 2*margin disagree. SKIPPED only when some
/// assignment of the ambiguous clauses would change the answer.
Theorem1Result theorem1_check(const UtilityOracle& oracle, const Outcome& a,
                              const GridSpec& grid);

}  // namespace pgcore

#endif  // PGCORE_GROUNDTRUTH_HPP
