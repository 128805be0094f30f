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

// Economic model: outcomes, coalitions, utility oracles, one-sided
// directional derivatives and projected economies.

#ifndef PGCORE_ECONOMY_HPP
#define PGCORE_ECONOMY_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pgcore {

using Vector = std::vector<double>;
using Matrix = std::vector<Vector>;

/// A point of the action box [0,1]^n, one action per agent.
class Outcome {
 public:
  Outcome() = default;
  /// Throws kDomainViolation if any action is outside [0,1] or not finite.
  explicit Outcome(Vector actions);

  static Outcome zeros(std::size_t n) { return Outcome(Vector(n, 0.0)); }

  std::size_t size() const noexcept { return actions_.size(); }
  double operator[](std::size_t i) const { return actions_[i]; }
  std::span<const double> values() const noexcept { return actions_; }
  const Vector& actions() const noexcept { return actions_; }

  /// True when 0 < a_i < 1 for every agent.
  bool interior() const noexcept;
  bool is_zero() const noexcept;

  friend bool operator==(const Outcome&, const Outcome&) = default;

 private:
  Vector actions_;
};

/// A search direction in action space. Components must be finite.
class Direction {
 public:
  Direction() = default;
  explicit Direction(Vector components);

  std::size_t size() const noexcept { return components_.size(); }
  double operator[](std::size_t i) const { return components_[i]; }
  std::span<const double> values() const noexcept { return components_; }
  const Vector& components() const noexcept { return components_; }
  bool is_zero() const noexcept;
  Direction scaled(double factor) const;

  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  Vector components_;
};

/// A nonempty set of agents, stored as strictly increasing indices < n.
class Coalition {
 public:
  /// Throws kEmptyCoalition or kInvalidCoalition.
  Coalition(std::vector<std::size_t> members, std::size_t n);

  static Coalition grand(std::size_t n);
  /// Bit i of `mask` selects agent i.
  static Coalition from_mask(std::uint64_t mask, std::size_t n);

  std::size_t size() const noexcept { return members_.size(); }
  std::size_t universe() const noexcept { return n_; }
  const std::vector<std::size_t>& members() const noexcept { return members_; }
  bool contains(std::size_t agent) const;
  bool is_grand() const noexcept { return members_.size() == n_; }

  /// Keeps the coordinates of `full` that belong to the coalition.
  Vector restrict(std::span<const double> full) const;
  /// Inverse of restrict: embeds `sub` into R^n with zeros off-coalition.
  Vector pad(std::span<const double> sub) const;

  std::string to_string() const;

  friend bool operator==(const Coalition&, const Coalition&) = default;

 private:
  std::vector<std::size_t> members_;
  std::size_t n_ = 0;
};

/// Black-box access to an economy's utility function u : [0,1]^n -> R^n.
///
/// Oracles are immutable after construction and safe to share across
/// threads. `derivative`, when present, returns the one-sided directional
/// derivative d_v u(a); otherwise finite differences are used.
class UtilityOracle {
 public:
  using EvaluateFn = std::function<Vector(std::span<const double>)>;
  using DerivativeFn =
      std::function<Vector(std::span<const double>, std::span<const double>)>;

  UtilityOracle(std::size_t n, EvaluateFn evaluate, DerivativeFn derivative = {});

  std::size_t agents() const noexcept { return n_; }
  bool has_analytic_derivative() const noexcept {
    return static_cast<bool>(derivative_);
  }

  // Unchecked hot-path access; callers guarantee lengths and domain.
  Vector raw_evaluate(std::span<const double> a) const { return (*evaluate_)(a); }
  Vector raw_derivative(std::span<const double> a,
                        std::span<const double> v) const {
    return (*derivative_)(a, v);
  }

  /// Copy of this oracle with the analytic derivative stripped, so every
  /// derivative goes through finite differences.
  UtilityOracle without_derivative() const;

 private:
  std::size_t n_;
  std::shared_ptr<const EvaluateFn> evaluate_;
  std::shared_ptr<const DerivativeFn> derivative_;
};

/// u(a). Throws kDimensionMismatch, kDomainViolation, or kInvalidEconomy
/// if the oracle returns a wrong-length or non-finite vector.
Vector evaluate(const UtilityOracle& oracle, const Outcome& a);
Vector evaluate(const UtilityOracle& oracle, std::span<const double> a);

/// Agents whose coordinates block direction v at a: v_i < 0 with a_i = 0,
/// or v_i > 0 with a_i = 1.
std::vector<std::size_t> blocking_agents(std::span<const double> a,
                                         std::span<const double> v);

/// Largest t >= 0 with a + t v inside the box (infinity for v = 0).
double max_step_in_box(std::span<const double> a, std::span<const double> v);

/// One-sided directional derivative d_v u(a). Uses the analytic derivative
/// when the oracle has one, finite differences otherwise.
Vector directional_derivative(const UtilityOracle& oracle,
                              std::span<const double> a,
                              std::span<const double> v);
Vector directional_derivative(const UtilityOracle& oracle, const Outcome& a,
                              const Direction& v);

/// Forward-difference estimate of d_v u(a), ignoring any analytic
/// derivative. Estimates at steps h and h/2 must agree; the returned value
/// is their Richardson combination, which stays one-sided.
Vector finite_difference_derivative(const UtilityOracle& oracle,
                                    std::span<const double> a,
                                    std::span<const double> v);

/// Row i holds the one-sided partials of u_i at a. Coordinates sitting at
/// the upper face use the backward one-sided derivative.
Matrix jacobian(const UtilityOracle& oracle, std::span<const double> a);

/// The projected economy u^C(x) = u_C(x padded with zeros off C).
UtilityOracle project(const UtilityOracle& oracle, const Coalition& coalition);

// --- assumption checks -----------------------------------------------------

struct ConcavityViolation {
  Vector first;
  Vector second;
  std::size_t agent = 0;
  /// u_i(midpoint) - average of endpoint utilities (negative when violated).
  double midpoint_gap = 0.0;
};

struct ExternalityViolation {
  Vector higher;  // a, with a >= a' and a != a'
  Vector lower;   // a'
  std::size_t agent = 0;
};

struct EconomyValidationReport {
  std::vector<ConcavityViolation> concavity_violations;
  std::vector<ExternalityViolation> externality_violations;
  std::size_t samples_checked = 0;
  /// Largest sampled gradient norm max_{x,i} |grad u_i(x)|_2.
  double estimated_kappa = 0.0;
  /// Sampled utilities falling outside [0,1]. Informational only.
  std::size_t range_warnings = 0;

  bool valid() const noexcept {
    return concavity_violations.empty() && externality_violations.empty();
  }
};

/// Samples `samples` outcome pairs (seeded) and checks midpoint concavity
/// and positive externalities; also estimates the condition number kappa.
/// Never throws on violations; they are reported.
EconomyValidationReport validate_economy(const UtilityOracle& oracle,
                                         std::size_t samples,
                                         std::uint64_t seed);

}  // namespace pgcore

#endif  // PGCORE_ECONOMY_HPP
