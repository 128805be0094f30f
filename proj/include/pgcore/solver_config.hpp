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

#ifndef PGCORE_SOLVER_CONFIG_HPP
#define PGCORE_SOLVER_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace pgcore {

enum class Mode { kExact, kApprox };

std::string_view mode_name(Mode mode);

/// Tolerances and budgets shared by the optimizer and the core tests.
struct SolverConfig {
  /// Target accuracy of each max-min solve.
  double epsilon = 1e-6;
  /// A value counts as strictly positive only when it exceeds tau_dev.
  double tau_dev = 1e-5;
  std::size_t max_iterations = 50000;
  std::uint64_t seed = 0;
  Mode mode = Mode::kExact;
  /// Approximate mode only: size of the deviations to detect, and an upper
  /// bound on every directional derivative of every utility.
  double eps_core = 0.0;
  double kappa = 0.0;

  /// Throws kInvalidConfig. tau_dev must be at least 10x epsilon.
  void validate() const;

  static SolverConfig approx(double eps_core, double kappa);

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

}  // namespace pgcore

#endif  // PGCORE_SOLVER_CONFIG_HPP
