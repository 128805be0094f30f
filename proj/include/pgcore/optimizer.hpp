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

// Concave max-min solver: maximize f(x) = min_i g_i(x) over a box or a
// signed simplex, each g_i concave with supergradient access.

#ifndef PGCORE_OPTIMIZER_HPP
#define PGCORE_OPTIMIZER_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include "pgcore/economy.hpp"
#include "pgcore/solver_config.hpp"

namespace pgcore {

/// Either a box {lo <= x <= hi} or a signed simplex
/// {sign * v >= 0, sum_i v_i = sign} with sign in {+1, -1}.
class FeasibleSet {
 public:
  enum class Kind { kBox, kSignedSimplex };

  /// Throws kInfeasibleSet when lo > hi somewhere or lengths differ.
  static FeasibleSet box(Vector lo, Vector hi);
  /// Throws kInfeasibleSet for sign not in {+1,-1} or dimension 0.
  static FeasibleSet signed_simplex(int sign, std::size_t dimension);

  Kind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  const Vector& lo() const noexcept { return lo_; }
  const Vector& hi() const noexcept { return hi_; }
  int sign() const noexcept { return sign_; }

  bool contains(std::span<const double> x, double tol = 1e-12) const;
  /// Euclidean diameter.
  double diameter() const;
  /// Barycenter of the simplex, midpoint of the box.
  Vector center() const;
  /// max over y in the set of w . y
  double support(std::span<const double> w) const;
  /// A maximizer of w . y over the set (a vertex).
  Vector support_point(std::span<const double> w) const;

 private:
  FeasibleSet() = default;

  Kind kind_ = Kind::kBox;
  std::size_t dimension_ = 0;
  Vector lo_;
  Vector hi_;
  int sign_ = 1;
};

/// Euclidean projection: a clamp for boxes, the sorting-based simplex
/// projection applied to sign * x for signed simplices.
Vector project_onto(const FeasibleSet& set, std::span<const double> x);

struct MaxMinProblem {
  std::size_t components = 0;
  /// All g_i(x) at once, length `components`.
  std::function<Vector(std::span<const double>)> values;
  /// A supergradient of g_i at x.
  std::function<Vector(std::size_t, std::span<const double>)> supergradient;
  FeasibleSet feasible = FeasibleSet::box({0.0}, {1.0});
  /// Starting point, projected onto the feasible set. Defaults to center().
  std::optional<Vector> start;
};

struct SolveResult {
  Vector argmax;
  /// min_i g_i(argmax), recomputed at return.
  double value = 0.0;
  std::size_t iterations = 0;
  /// Upper bound on (true optimum - value); infinity when unavailable.
  double certified_gap = 0.0;
  /// Set when the gap could not be certified to epsilon: max_iterations ran
  /// out, or the ascent stalled first. argmax is still the best point seen.
  bool budget_exhausted = false;
};

/// Projected supergradient ascent with Polyak steps aimed at a target level,
/// best-iterate tracking, and a Lagrangian certificate for termination.
/// Deterministic: identical inputs give bitwise-identical results.
/// Throws kInvalidProblem for malformed problems or kInvalidConfig.
SolveResult solve_maxmin(const MaxMinProblem& problem, const SolverConfig& cfg);

/// Lagrangian upper bound on max_x min_i g_i(x) built from the
/// linearizations of every g_i at x. Valid for any concave g_i.
double maxmin_upper_bound(const MaxMinProblem& problem, std::span<const double> x);

}  // namespace pgcore

#endif  // PGCORE_OPTIMIZER_HPP
