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

// Built-in utility families. All of them are concave with positive
// externalities whenever their parameters pass check_spec().
//
//   affine     u_i(a) = sum_j W_ij a_j
//   quadratic  u_i(a) = sum_j W_ij a_j - c_i a_i^2
//   logagg     u_i(a) = alpha_i log(1 + sum_j W_ij a_j) - beta_i a_i

#ifndef PGCORE_FAMILIES_HPP
#define PGCORE_FAMILIES_HPP

#include <cstdint>
#include <optional>
#include <string_view>

#include "pgcore/economy.hpp"

namespace pgcore {

enum class Family { kAffine, kQuadratic, kLogAgg };

std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);

/// Parameters of a built-in economy, as stored in an economy file.
struct EconomySpec {
  std::size_t n = 0;
  Family family = Family::kAffine;
  Matrix weights;    // W, all families
  Vector curvature;  // c, quadratic only
  Vector alpha;      // logagg only
  Vector beta;       // logagg only
  std::optional<std::uint64_t> seed;

  friend bool operator==(const EconomySpec&, const EconomySpec&) = default;
};

/// Throws kInvalidEconomy when shapes disagree with n or a parameter breaks
/// concavity / positive externalities (negative weights, zero off-diagonal
/// weights, negative curvature, non-positive alpha, negative beta).
void check_spec(const EconomySpec& spec);

UtilityOracle make_oracle(const EconomySpec& spec);

UtilityOracle make_affine(Matrix weights);
UtilityOracle make_quadratic(Matrix weights, Vector curvature);
UtilityOracle make_logagg(Vector alpha, Matrix weights, Vector beta);

/// Deterministic random instance of a family; used by the test suites and
/// the experiment drivers.
EconomySpec random_economy(Family family, std::size_t n, std::uint64_t seed);

}  // namespace pgcore

#endif  // PGCORE_FAMILIES_HPP
