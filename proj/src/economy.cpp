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

#include "pgcore/economy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "pgcore/error.hpp"

namespace pgcore {
namespace {

void require_finite_output(const Vector& u, std::size_t n) {
  if (u.size() != n) {
    throw Error(ErrorCode::kInvalidEconomy,
                "oracle returned " + std::to_string(u.size()) +
                    " utilities for " + std::to_string(n) + " agents");
  }
  for (double value : u) {
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::kInvalidEconomy, "oracle returned a non-finite utility");
    }
  }
}

void require_in_box(std::span<const double> a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] >= 0.0 && a[i] <= 1.0)) {
      std::ostringstream os;
      os << "action " << i << " = " << a[i] << " lies outside [0,1]";
      throw Error(ErrorCode::kDomainViolation, os.str());
    }
  }
}

std::string join_indices(const std::vector<std::size_t>& idx) {
  std::ostringstream os;
  for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << idx[k];
  return os.str();
}

Vector axpy(std::span<const double> a, double t, std::span<const double> v) {
  Vector out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    // Clamp away rounding spill past the faces; t never exceeds the box step.
    out[i] = std::clamp(out[i] + t * v[i], 0.0, 1.0);
  }
  return out;
}

}  // namespace

Outcome::Outcome(Vector actions) : actions_(std::move(actions)) {
  require_in_box(actions_);
}

bool Outcome::interior() const noexcept {
  return std::all_of(actions_.begin(), actions_.end(),
                     [](double x) { return x > 0.0 && x < 1.0; });
}

bool Outcome::is_zero() const noexcept {
  return std::all_of(actions_.begin(), actions_.end(),
                     [](double x) { return x == 0.0; });
}

Direction::Direction(Vector components) : components_(std::move(components)) {
  for (double c : components_) {
    if (!std::isfinite(c)) {
      throw Error(ErrorCode::kDomainViolation, "direction has a non-finite component");
    }
  }
}

bool Direction::is_zero() const noexcept {
  return std::all_of(components_.begin(), components_.end(),
                     [](double x) { return x == 0.0; });
}

Direction Direction::scaled(double factor) const {
  Vector out = components_;
  for (double& c : out) c *= factor;
  return Direction(std::move(out));
}

Coalition::Coalition(std::vector<std::size_t> members, std::size_t n)
    : members_(std::move(members)), n_(n) {
  if (members_.empty()) {
    throw Error(ErrorCode::kEmptyCoalition, "a coalition needs at least one agent");
  }
  for (std::size_t k = 0; k < members_.size(); ++k) {
    if (members_[k] >= n_ || (k > 0 && members_[k] <= members_[k - 1])) {
      throw Error(ErrorCode::kInvalidCoalition,
                  "members must be strictly increasing and below " +
                      std::to_string(n_) + ": {" + join_indices(members_) + "}");
    }
  }
}

Coalition Coalition::grand(std::size_t n) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return Coalition(std::move(all), n);
}

Coalition Coalition::from_mask(std::uint64_t mask, std::size_t n) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < n && i < 64; ++i) {
    if (mask & (std::uint64_t{1} << i)) members.push_back(i);
  }
  return Coalition(std::move(members), n);
}

bool Coalition::contains(std::size_t agent) const {
  return std::binary_search(members_.begin(), members_.end(), agent);
}

Vector Coalition::restrict(std::span<const double> full) const {
  if (full.size() != n_) {
    throw Error(ErrorCode::kDimensionMismatch, "restrict expects a length-" +
                                                   std::to_string(n_) + " vector");
  }
  Vector out;
  out.reserve(members_.size());
  for (std::size_t i : members_) out.push_back(full[i]);
  return out;
}

Vector Coalition::pad(std::span<const double> sub) const {
  if (sub.size() != members_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "pad expects a length-" +
                                                   std::to_string(members_.size()) +
                                                   " vector");
  }
  Vector out(n_, 0.0);
  for (std::size_t k = 0; k < members_.size(); ++k) out[members_[k]] = sub[k];
  return out;
}

std::string Coalition::to_string() const { return "{" + join_indices(members_) + "}"; }

UtilityOracle::UtilityOracle(std::size_t n, EvaluateFn evaluate, DerivativeFn derivative)
    : n_(n),
      evaluate_(std::make_shared<const EvaluateFn>(std::move(evaluate))),
      derivative_(derivative ? std::make_shared<const DerivativeFn>(std::move(derivative))
                             : nullptr) {
  if (n_ == 0) throw Error(ErrorCode::kInvalidEconomy, "an economy needs at least one agent");
  if (!*evaluate_) throw Error(ErrorCode::kInvalidEconomy, "missing evaluate callable");
}

UtilityOracle UtilityOracle::without_derivative() const {
  UtilityOracle copy = *this;
  copy.derivative_.reset();
  return copy;
}

Vector evaluate(const UtilityOracle& oracle, std::span<const double> a) {
  if (a.size() != oracle.agents()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "outcome has " + std::to_string(a.size()) + " actions, economy has " +
                    std::to_string(oracle.agents()) + " agents");
  }
  require_in_box(a);
  Vector u = oracle.raw_evaluate(a);
  require_finite_output(u, oracle.agents());
  return u;
}

Vector evaluate(const UtilityOracle& oracle, const Outcome& a) {
  return evaluate(oracle, a.values());
}

std::vector<std::size_t> blocking_agents(std::span<const double> a,
                                         std::span<const double> v) {
  std::vector<std::size_t> blocked;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((v[i] < 0.0 && a[i] <= 0.0) || (v[i] > 0.0 && a[i] >= 1.0)) blocked.push_back(i);
  }
  return blocked;
}

double max_step_in_box(std::span<const double> a, std::span<const double> v) {
  double t = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (v[i] > 0.0) t = std::min(t, (1.0 - a[i]) / v[i]);
    if (v[i] < 0.0) t = std::min(t, a[i] / -v[i]);
  }
  return std::max(t, 0.0);
}

namespace {

void check_derivative_request(const UtilityOracle& oracle, std::span<const double> a,
                              std::span<const double> v) {
  if (a.size() != oracle.agents() || v.size() != oracle.agents()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "derivative request does not match the economy's " +
                    std::to_string(oracle.agents()) + " agents");
  }
  require_in_box(a);
  for (double c : v) {
    if (!std::isfinite(c)) {
      throw Error(ErrorCode::kDomainViolation, "direction has a non-finite component");
    }
  }
  auto blocked = blocking_agents(a, v);
  if (!blocked.empty()) {
    throw BoundaryInfeasibleError(
        blocked, "direction leaves the action box at agents " + join_indices(blocked));
  }
}

}  // namespace

Vector finite_difference_derivative(const UtilityOracle& oracle, std::span<const double> a,
                                    std::span<const double> v) {
  check_derivative_request(oracle, a, v);
  const std::size_t n = oracle.agents();
  const double reach = max_step_in_box(a, v);
  if (std::isinf(reach)) return Vector(n, 0.0);  // zero direction

  const double h = std::min(std::max(1e-5, 1e-7 * reach), reach);
  const Vector u0 = evaluate(oracle, a);
  const Vector u_full = evaluate(oracle, axpy(a, h, v));
  const Vector u_half = evaluate(oracle, axpy(a, 0.5 * h, v));

  constexpr double kRoundoff = 8.0 * std::numeric_limits<double>::epsilon();
  constexpr double kCurvatureAllowance = 10.0;
  Vector d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double coarse = (u_full[i] - u0[i]) / h;
    const double fine = (u_half[i] - u0[i]) / (0.5 * h);
    const double scale = std::max({std::abs(u0[i]), std::abs(u_full[i]), 1.0});
    // The quotients differ by about h/4 * u'' even on smooth utilities, which
    // swamps the relative test wherever the derivative itself is near zero.
    const double tol = 1e-4 * std::max(std::abs(coarse), std::abs(fine)) +
                       kRoundoff * scale / (0.5 * h) + kCurvatureAllowance * h * scale;
    if (!std::isfinite(coarse) || !std::isfinite(fine) || std::abs(coarse - fine) > tol) {
      std::ostringstream os;
      os << "difference quotients disagree for agent " << i << " (" << coarse << " at h="
         << h << ", " << fine << " at h/2)";
      throw Error(ErrorCode::kNonFiniteDerivative, os.str());
    }
    d[i] = 2.0 * fine - coarse;
  }
  return d;
}

Vector directional_derivative(const UtilityOracle& oracle, std::span<const double> a,
                              std::span<const double> v) {
  if (!oracle.has_analytic_derivative()) return finite_difference_derivative(oracle, a, v);
  check_derivative_request(oracle, a, v);
  Vector d = oracle.raw_derivative(a, v);
  if (d.size() != oracle.agents()) {
    throw Error(ErrorCode::kInvalidEconomy, "analytic derivative has the wrong length");
  }
  for (double x : d) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kNonFiniteDerivative, "analytic derivative is not finite");
    }
  }
  return d;
}

Vector directional_derivative(const UtilityOracle& oracle, const Outcome& a,
                              const Direction& v) {
  return directional_derivative(oracle, a.values(), v.values());
}

Matrix jacobian(const UtilityOracle& oracle, std::span<const double> a) {
  const std::size_t n = oracle.agents();
  Matrix rows(n, Vector(n, 0.0));
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const bool forward = a[j] < 1.0;
    e[j] = forward ? 1.0 : -1.0;
    Vector column = directional_derivative(oracle, a, e);
    for (std::size_t i = 0; i < n; ++i) rows[i][j] = forward ? column[i] : -column[i];
    e[j] = 0.0;
  }
  return rows;
}

UtilityOracle project(const UtilityOracle& oracle, const Coalition& coalition) {
  if (coalition.universe() != oracle.agents()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "coalition is over " + std::to_string(coalition.universe()) +
                    " agents, economy has " + std::to_string(oracle.agents()));
  }
  if (coalition.is_grand()) return oracle;

  auto evaluate_fn = [oracle, coalition](std::span<const double> x) {
    Vector full = coalition.pad(x);
    return coalition.restrict(oracle.raw_evaluate(full));
  };
  UtilityOracle::DerivativeFn derivative_fn;
  if (oracle.has_analytic_derivative()) {
    derivative_fn = [oracle, coalition](std::span<const double> x,
                                        std::span<const double> v) {
      Vector full_x = coalition.pad(x);
      Vector full_v = coalition.pad(v);
      return coalition.restrict(oracle.raw_derivative(full_x, full_v));
    };
  }
  return UtilityOracle(coalition.size(), std::move(evaluate_fn), std::move(derivative_fn));
}

EconomyValidationReport validate_economy(const UtilityOracle& oracle, std::size_t samples,
                                         std::uint64_t seed) {
  if (samples == 0) throw Error(ErrorCode::kInvalidConfig, "validation needs samples >= 1");
  const std::size_t n = oracle.agents();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&] {
    Vector x(n);
    for (double& c : x) c = unit(rng);
    return x;
  };

  EconomyValidationReport report;
  report.samples_checked = samples;
  auto count_range = [&report](const Vector& u) {
    for (double value : u) {
      if (value < 0.0 || value > 1.0) ++report.range_warnings;
    }
  };
  auto update_kappa = [&](const Vector& x) {
    for (const Vector& row : jacobian(oracle, x)) {
      double norm2 = 0.0;
      for (double g : row) norm2 += g * g;
      report.estimated_kappa = std::max(report.estimated_kappa, std::sqrt(norm2));
    }
  };

  // Extreme gradients of concave utilities tend to sit on the vertices.
  if (n < 63 && (std::uint64_t{1} << n) <= samples) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      Vector vertex(n);
      for (std::size_t i = 0; i < n; ++i) vertex[i] = (mask >> i) & 1U ? 1.0 : 0.0;
      update_kappa(vertex);
    }
  }

  for (std::size_t s = 0; s < samples; ++s) {
    const Vector a = draw();
    const Vector b = draw();
    Vector mid(n);
    for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (a[i] + b[i]);
    const Vector ua = evaluate(oracle, a);
    const Vector ub = evaluate(oracle, b);
    const Vector um = evaluate(oracle, mid);
    count_range(ua);
    count_range(ub);

    std::size_t worst = 0;
    double worst_gap = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double gap = um[i] - 0.5 * (ua[i] + ub[i]);
      const double tol = 1e-10 * (1.0 + std::abs(ua[i]) + std::abs(ub[i]));
      if (gap < -tol && gap < worst_gap) {
        worst = i;
        worst_gap = gap;
      }
    }
    if (worst_gap < 0.0) report.concavity_violations.push_back({a, b, worst, worst_gap});

    update_kappa(a);

    if (n >= 2) {
      // Lower every other agent with a visible action; agent i stays put.
      const auto agent = static_cast<std::size_t>(unit(rng) * static_cast<double>(n)) % n;
      Vector lower = a;
      bool lowered = false;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == agent || a[j] < 1e-3) continue;
        if (unit(rng) < 0.5 && lowered) continue;
        lower[j] = a[j] * (0.1 + 0.8 * unit(rng));
        lowered = true;
      }
      if (lowered) {
        const Vector ul = evaluate(oracle, lower);
        if (!(ua[agent] > ul[agent])) report.externality_violations.push_back({a, lower, agent});
      }
    }
  }
  return report;
}

}  // namespace pgcore
