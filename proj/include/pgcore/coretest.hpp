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

// Core membership: Pareto preprocessing, the coalition elimination loop, the
// Lindahl local test and the approximate (eps-core) variant.

#ifndef PGCORE_CORETEST_HPP
#define PGCORE_CORETEST_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pgcore/economy.hpp"
#include "pgcore/solver_config.hpp"

namespace pgcore {

enum class CoreStatus { kInCore, kNotPareto, kDeviationFound };

std::string_view core_status_name(CoreStatus status);
std::optional<CoreStatus> parse_core_status(std::string_view name);

struct Deviation {
  Coalition coalition;
  /// Full-length outcome, zero off the coalition.
  Outcome point;

  friend bool operator==(const Deviation&, const Deviation&) = default;
};

/// One completed elimination round. Vectors are full length (zeros for
/// agents already eliminated).
struct EliminationStep {
  std::size_t round = 0;  // 1-based
  std::size_t agent = 0;
  Vector x_star;
  /// Empty when the agent was removed without a descent program (it was
  /// the last one left, or already at zero).
  Vector v_star;
  /// x*_i / |v*_i| for the eliminated agent; 0 for immediate removals.
  double ratio = 0.0;
  double program3_value = 0.0;
  /// Largest u_i(x*) - u_i(a) over the round's coalition.
  double max_gap = 0.0;
  /// Approximate mode: decrements applied before the descent step.
  std::size_t slide_steps = 0;
  /// At the maximizer either every gap exceeds tau_dev or none does.
  bool gap_dichotomy = true;
  /// d_{v*} u(x*) <= tau_dev componentwise (true when no v* was computed).
  bool descent_nonpositive = true;

  friend bool operator==(const EliminationStep&, const EliminationStep&) = default;
};

struct CoreVerdict {
  CoreStatus status = CoreStatus::kInCore;
  std::optional<Deviation> deviation;
  std::optional<Direction> improving_direction;
  std::vector<EliminationStep> elimination_trace;
  std::size_t programs_solved = 0;
  /// Optimal values of the up and down Pareto programs, when solved.
  std::optional<double> up_value;
  std::optional<double> down_value;
  std::size_t slide_steps = 0;
  /// Solves whose optimality gap could not be certified to epsilon.
  std::size_t uncertified_solves = 0;
  SolverConfig config;

  friend bool operator==(const CoreVerdict&, const CoreVerdict&) = default;
};

enum class ParetoStatus { kEfficient, kImproving };

struct ParetoResult {
  ParetoStatus status = ParetoStatus::kEfficient;
  /// Witness with d_v u(a) > tau_dev componentwise, when improving.
  std::optional<Direction> direction;
  /// Program values; absent when every coordinate blocks that side.
  std::optional<double> up_value;
  std::optional<double> down_value;
  std::optional<Direction> up_direction;
  std::optional<Direction> down_direction;
  std::size_t programs_solved = 0;
  std::size_t uncertified_solves = 0;
};

/// Result of maximizing min_i d_v u_i(x) over a signed simplex restricted to
/// the coordinates that may move in that direction.
struct DescentProgram {
  Vector direction;  // full length
  double value = 0.0;
  bool certified = true;
};

/// max_v min_i d_v u_i(x) over {v : sign*v >= 0, sum v = sign}, with v
/// fixed at zero on coordinates that block the sign (x_i = 1 for sign +1,
/// x_i = 0 for sign -1). Empty when no coordinate is free.
std::optional<DescentProgram> solve_direction_program(const UtilityOracle& oracle,
                                                      std::span<const double> x, int sign,
                                                      const SolverConfig& cfg);

/// Solves the up and down direction programs at a and reports an improving
/// direction if either optimum exceeds tau_dev.
ParetoResult pareto_preprocess(const UtilityOracle& oracle, const Outcome& a,
                               const SolverConfig& cfg);

/// Exact mode decision. Dispatches to test_core_membership_approx when
/// cfg.mode is kApprox. Throws kDimensionMismatch, kInvalidConfig, solver
/// errors, or kInvalidEconomy when a concavity violation shows up mid-run.
CoreVerdict test_core_membership(const UtilityOracle& oracle, const Outcome& a,
                                 const SolverConfig& cfg);

/// Eps-core variant: no preprocessing, the coalition program over the unit box solved to
/// eps_core/(2 kappa), then a slide that lowers under-served agents before
/// each descent step. Throws kSlideBudgetExhausted after
/// slide_budget(n, cfg) decrements.
CoreVerdict test_core_membership_approx(const UtilityOracle& oracle, const Outcome& a,
                                        const SolverConfig& cfg);

/// ceil(4 n kappa / eps_core)
std::size_t slide_budget(std::size_t n, const SolverConfig& cfg);

/// Index whose coordinate reaches zero first moving from x_star along
/// v_star. An index already at zero with v_i <= 0 wins immediately; ties go
/// to the lowest index. Throws kNoDescent when no v_i is negative, and
/// kDimensionMismatch on length mismatch.
std::size_t least_valuable_agent(std::span<const double> x_star, std::span<const double> v_star);

struct LindahlResult {
  bool is_lindahl = false;
  /// d_a u(a), or d_{-a} u(a) when the upward direction is blocked.
  Vector derivative;
  double norm = 0.0;  // max |derivative_i|
  /// +1 when the direction a was used, -1 for -a.
  int direction_sign = 1;
};

/// Tests ||d_a u(a)||_inf <= tol. When some a_i = 1 blocks the direction a,
/// checks d_{-a} u(a) instead. Throws kDomainViolation for a = 0.
LindahlResult lindahl_test(const UtilityOracle& oracle, const Outcome& a, double tol);
bool is_lindahl(const UtilityOracle& oracle, const Outcome& a, double tol);

/// Strength of a verdict's evidence against core membership: the smallest
/// gain of the deviating coalition, or for NOT_PARETO the max-min gain of
/// the grand coalition over the whole box (one extra solve). Returns 0 for
/// IN_CORE. `witness` receives the outcome achieving it.
double not_in_core_strength(const UtilityOracle& oracle, const Outcome& a,
                            const CoreVerdict& verdict, const SolverConfig& cfg,
                            Vector* witness = nullptr);

/// Independent re-check of a verdict's certificate: a deviation must beat
/// u(a) by more than tau_dev on every member by direct evaluation; an
/// improving direction must have strictly positive finite-difference
/// derivatives. IN_CORE verdicts must carry n trace rounds within the
/// program budget.
bool certificate_valid(const UtilityOracle& oracle, const Outcome& a, const CoreVerdict& verdict);

/// 2 + 2n in exact mode, 2n in approximate mode.
std::size_t program_budget(std::size_t n, Mode mode);

}  // namespace pgcore

#endif  // PGCORE_CORETEST_HPP
