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

#include "pgcore/coretest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pgcore/error.hpp"
#include "pgcore/optimizer.hpp"

namespace pgcore {
namespace {

// Step for differencing d_v u(x) in v. The map is positively homogeneous
// and, for differentiable u, linear, so the step size barely matters.
constexpr double kDirectionStep = 1e-4;
// Slack for the tangent-plane check that guards against non-concave input.
constexpr double kConcavitySlack = 1e-6;

void check_length(const UtilityOracle& oracle, std::size_t size) {
  if (size != oracle.agents()) {
    std::ostringstream os;
    os << "outcome has " << size << " coordinates but the economy has " << oracle.agents()
       << " agents";
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
}

double min_of(const Vector& v) { return *std::min_element(v.begin(), v.end()); }
double max_of(const Vector& v) { return *std::max_element(v.begin(), v.end()); }

struct GapSolve {
  Vector x;
  Vector gaps;  // u_i(x) - u_i(a) on the coalition
  double value = 0.0;
  bool certified = true;
};

// max_x min_i u_i(x) - target_i over the box [0, hi] in a (projected)
// economy, with Jacobian rows as supergradients.
GapSolve solve_gap_program(const UtilityOracle& economy, const Vector& target, const Vector& hi,
                           const Vector& start, const SolverConfig& cfg) {
  const std::size_t k = economy.agents();
  Vector cached_at;
  Matrix cached_rows;
  MaxMinProblem problem;
  problem.components = k;
  problem.feasible = FeasibleSet::box(Vector(k, 0.0), hi);
  problem.start = start;
  problem.values = [&](std::span<const double> x) {
    Vector u = evaluate(economy, x);
    for (std::size_t i = 0; i < k; ++i) u[i] -= target[i];
    return u;
  };
  problem.supergradient = [&](std::size_t i, std::span<const double> x) {
    if (cached_rows.empty() || !std::equal(x.begin(), x.end(), cached_at.begin(), cached_at.end())) {
      cached_at.assign(x.begin(), x.end());
      cached_rows = jacobian(economy, x);
    }
    return cached_rows[i];
  };
  const SolveResult r = solve_maxmin(problem, cfg);

  GapSolve out;
  out.x = r.argmax;
  out.gaps = problem.values(out.x);
  out.value = r.value;
  out.certified = !r.budget_exhausted;

  // Concavity makes every u_i lie below its tangent plane at x*. Check the
  // corners of the search box and the starting point.
  const Matrix rows = jacobian(economy, out.x);
  const Vector u_star = evaluate(economy, out.x);
  for (const Vector* probe : {&start, &hi}) {
    const Vector u_probe = evaluate(economy, *probe);
    for (std::size_t i = 0; i < k; ++i) {
      double plane = u_star[i];
      for (std::size_t j = 0; j < k; ++j) plane += rows[i][j] * ((*probe)[j] - out.x[j]);
      const double excess = u_probe[i] - plane;
      if (excess > kConcavitySlack * (1.0 + std::abs(u_probe[i]))) {
        std::ostringstream os;
        os.precision(17);
        os << "utility " << i << " of the " << k
           << "-agent economy rises above its tangent plane by " << excess
           << "; the economy is not concave";
        throw Error(ErrorCode::kInvalidEconomy, os.str());
      }
    }
  }
  return out;
}

struct Removal {
  std::size_t index = 0;  // position within the coalition
  Vector v_star;          // coalition coordinates, empty if none computed
  double ratio = 0.0;
  bool descent_nonpositive = true;
  bool solved = false;
  bool certified = true;
};

// Picks the coalition member to drop after a round without deviation.
Removal choose_removal(const UtilityOracle& economy, const Vector& x, const SolverConfig& cfg) {
  Removal out;
  if (x.size() == 1) return out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0) {
      out.index = i;
      return out;
    }
  }
  const auto program = solve_direction_program(economy, x, -1, cfg);
  // Every coordinate is positive, so the down program always has room.
  out.solved = true;
  out.certified = program->certified;
  out.v_star = program->direction;
  const Vector slope = directional_derivative(economy, x, out.v_star);
  out.descent_nonpositive = max_of(slope) <= cfg.tau_dev;
  out.index = least_valuable_agent(x, out.v_star);
  out.ratio = x[out.index] / std::abs(out.v_star[out.index]);
  return out;
}

void check_verdict_budget(const CoreVerdict& verdict, std::size_t n) {
  if (verdict.programs_solved > program_budget(n, verdict.config.mode)) {
    std::ostringstream os;
    os << "solved " << verdict.programs_solved << " programs, over the budget of "
       << program_budget(n, verdict.config.mode);
    throw Error(ErrorCode::kInvalidProblem, os.str());
  }
}

}  // namespace

std::string_view core_status_name(CoreStatus status) {
  switch (status) {
    case CoreStatus::kInCore:
      return "IN_CORE";
    case CoreStatus::kNotPareto:
      return "NOT_PARETO";
    case CoreStatus::kDeviationFound:
      return "DEVIATION_FOUND";
  }
  return "IN_CORE";
}

std::optional<CoreStatus> parse_core_status(std::string_view name) {
  for (CoreStatus s : {CoreStatus::kInCore, CoreStatus::kNotPareto, CoreStatus::kDeviationFound}) {
    if (core_status_name(s) == name) return s;
  }
  return std::nullopt;
}

std::size_t program_budget(std::size_t n, Mode mode) {
  return mode == Mode::kExact ? 2 + 2 * n : 2 * n;
}

std::size_t slide_budget(std::size_t n, const SolverConfig& cfg) {
  return static_cast<std::size_t>(
      std::ceil(4.0 * static_cast<double>(n) * cfg.kappa / cfg.eps_core));
}

std::optional<DescentProgram> solve_direction_program(const UtilityOracle& oracle,
                                                      std::span<const double> x, int sign,
                                                      const SolverConfig& cfg) {
  check_length(oracle, x.size());
  const std::size_t n = oracle.agents();
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < n; ++i) {
    if (sign > 0 ? x[i] < 1.0 : x[i] > 0.0) free.push_back(i);
  }
  if (free.empty()) return std::nullopt;

  const Vector at(x.begin(), x.end());
  auto widen = [&](std::span<const double> v) {
    Vector full(n, 0.0);
    for (std::size_t t = 0; t < free.size(); ++t) full[free[t]] = v[t];
    return full;
  };
  Vector cached_at;
  Matrix cached_rows;
  MaxMinProblem problem;
  problem.components = n;
  problem.feasible = FeasibleSet::signed_simplex(sign, free.size());
  problem.values = [&](std::span<const double> v) {
    return directional_derivative(oracle, at, widen(v));
  };
  // Differences toward `sign` keep every probe a feasible direction.
  problem.supergradient = [&](std::size_t i, std::span<const double> v) {
    if (cached_rows.empty() || !std::equal(v.begin(), v.end(), cached_at.begin(), cached_at.end())) {
      cached_at.assign(v.begin(), v.end());
      const Vector base = problem.values(v);
      cached_rows.assign(n, Vector(free.size(), 0.0));
      const double h = sign * kDirectionStep;
      for (std::size_t t = 0; t < free.size(); ++t) {
        Vector probe(v.begin(), v.end());
        probe[t] += h;
        const Vector moved = problem.values(probe);
        for (std::size_t r = 0; r < n; ++r) cached_rows[r][t] = (moved[r] - base[r]) / h;
      }
    }
    return cached_rows[i];
  };
  const SolveResult r = solve_maxmin(problem, cfg);
  DescentProgram out;
  out.direction = widen(r.argmax);
  out.value = r.value;
  out.certified = !r.budget_exhausted;
  return out;
}

ParetoResult pareto_preprocess(const UtilityOracle& oracle, const Outcome& a,
                               const SolverConfig& cfg) {
  check_length(oracle, a.size());
  cfg.validate();
  ParetoResult out;
  const auto up = solve_direction_program(oracle, a.values(), +1, cfg);
  const auto down = solve_direction_program(oracle, a.values(), -1, cfg);
  if (up) {
    ++out.programs_solved;
    out.uncertified_solves += up->certified ? 0 : 1;
    out.up_value = up->value;
    out.up_direction = Direction(up->direction);
  }
  if (down) {
    ++out.programs_solved;
    out.uncertified_solves += down->certified ? 0 : 1;
    out.down_value = down->value;
    out.down_direction = Direction(down->direction);
  }
  if (up && up->value > cfg.tau_dev) {
    out.status = ParetoStatus::kImproving;
    out.direction = out.up_direction;
  } else if (down && down->value > cfg.tau_dev) {
    out.status = ParetoStatus::kImproving;
    out.direction = out.down_direction;
  }
  return out;
}

CoreVerdict test_core_membership(const UtilityOracle& oracle, const Outcome& a,
                                 const SolverConfig& cfg) {
  if (cfg.mode == Mode::kApprox) return test_core_membership_approx(oracle, a, cfg);
  check_length(oracle, a.size());
  cfg.validate();
  const std::size_t n = oracle.agents();

  CoreVerdict verdict;
  verdict.config = cfg;
  const ParetoResult pareto = pareto_preprocess(oracle, a, cfg);
  verdict.programs_solved = pareto.programs_solved;
  verdict.uncertified_solves = pareto.uncertified_solves;
  verdict.up_value = pareto.up_value;
  verdict.down_value = pareto.down_value;
  if (pareto.status == ParetoStatus::kImproving) {
    verdict.status = CoreStatus::kNotPareto;
    verdict.improving_direction = pareto.direction;
    return verdict;
  }

  const Vector ua = evaluate(oracle, a);
  std::vector<std::size_t> members(n);
  std::iota(members.begin(), members.end(), std::size_t{0});
  for (std::size_t round = 1; round <= n; ++round) {
    const Coalition coalition(members, n);
    const UtilityOracle economy = project(oracle, coalition);
    const Vector a_c = coalition.restrict(a.values());
    const GapSolve best = solve_gap_program(economy, coalition.restrict(ua), a_c, a_c, cfg);
    ++verdict.programs_solved;
    verdict.uncertified_solves += best.certified ? 0 : 1;
    if (best.value > cfg.tau_dev) {
      verdict.status = CoreStatus::kDeviationFound;
      verdict.deviation = Deviation{coalition, Outcome(coalition.pad(best.x))};
      check_verdict_budget(verdict, n);
      return verdict;
    }

    const Removal removal = choose_removal(economy, best.x, cfg);
    if (removal.solved) {
      ++verdict.programs_solved;
      verdict.uncertified_solves += removal.certified ? 0 : 1;
    }
    EliminationStep step;
    step.round = round;
    step.agent = members[removal.index];
    step.x_star = coalition.pad(best.x);
    if (!removal.v_star.empty()) step.v_star = coalition.pad(removal.v_star);
    step.ratio = removal.ratio;
    step.program3_value = best.value;
    step.max_gap = max_of(best.gaps);
    step.gap_dichotomy = best.value > cfg.tau_dev || step.max_gap <= cfg.tau_dev;
    step.descent_nonpositive = removal.descent_nonpositive;
    verdict.elimination_trace.push_back(std::move(step));
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(removal.index));
  }
  verdict.status = CoreStatus::kInCore;
  check_verdict_budget(verdict, n);
  return verdict;
}

CoreVerdict test_core_membership_approx(const UtilityOracle& oracle, const Outcome& a,
                                        const SolverConfig& cfg) {
  check_length(oracle, a.size());
  if (cfg.mode != Mode::kApprox) {
    throw Error(ErrorCode::kInvalidConfig, "the approximate test needs an approx-mode config");
  }
  cfg.validate();
  const std::size_t n = oracle.agents();
  const double eps = cfg.eps_core;
  const double decrement = eps / (2.0 * cfg.kappa);
  const std::size_t budget = slide_budget(n, cfg);
  SolverConfig fine = cfg;
  fine.epsilon = std::min(cfg.epsilon, decrement);
  // A deviation reported here must also clear the strictness margin.
  const double threshold = std::max(eps, cfg.tau_dev);

  CoreVerdict verdict;
  verdict.config = cfg;
  const Vector ua = evaluate(oracle, a);
  std::vector<std::size_t> members(n);
  std::iota(members.begin(), members.end(), std::size_t{0});
  for (std::size_t round = 1; round <= n; ++round) {
    const Coalition coalition(members, n);
    const std::size_t k = coalition.size();
    const UtilityOracle economy = project(oracle, coalition);
    const Vector target = coalition.restrict(ua);
    const GapSolve best =
        solve_gap_program(economy, target, Vector(k, 1.0), coalition.restrict(a.values()), fine);
    ++verdict.programs_solved;
    verdict.uncertified_solves += best.certified ? 0 : 1;
    if (best.value > threshold) {
      verdict.status = CoreStatus::kDeviationFound;
      verdict.deviation = Deviation{coalition, Outcome(coalition.pad(best.x))};
      return verdict;
    }

    // Slide: lower an under-served agent until x sits strictly below the
    // frontier of the projected economy or some coordinate reaches zero.
    Vector x = best.x;
    std::size_t steps = 0;
    while (std::none_of(x.begin(), x.end(), [](double c) { return c <= 0.0; })) {
      const auto up = solve_direction_program(economy, x, +1, cfg);
      if (up && up->value > cfg.tau_dev) break;
      const Vector u = evaluate(economy, x);
      std::size_t pick = k;
      double lowest = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const double gap = u[i] - target[i];
        if (gap <= 0.5 * eps && (pick == k || gap < lowest)) {
          pick = i;
          lowest = gap;
        }
      }
      if (pick == k) {
        // Every member gains more than eps/2 at x.
        const double gain = [&] {
          double g = u[0] - target[0];
          for (std::size_t i = 1; i < k; ++i) g = std::min(g, u[i] - target[i]);
          return g;
        }();
        if (gain > cfg.tau_dev) {
          verdict.status = CoreStatus::kDeviationFound;
          verdict.deviation = Deviation{coalition, Outcome(coalition.pad(x))};
          return verdict;
        }
        break;
      }
      x[pick] = std::max(0.0, x[pick] - decrement);
      ++steps;
      if (++verdict.slide_steps > budget) {
        std::ostringstream os;
        os << "slide exceeded " << budget << " decrements";
        throw Error(ErrorCode::kSlideBudgetExhausted, os.str());
      }
    }

    const Removal removal = choose_removal(economy, x, cfg);
    if (removal.solved) {
      ++verdict.programs_solved;
      verdict.uncertified_solves += removal.certified ? 0 : 1;
    }
    const Vector u_x = evaluate(economy, x);
    EliminationStep step;
    step.round = round;
    step.agent = members[removal.index];
    step.x_star = coalition.pad(x);
    if (!removal.v_star.empty()) step.v_star = coalition.pad(removal.v_star);
    step.ratio = removal.ratio;
    step.program3_value = best.value;
    double max_gap = u_x[0] - target[0];
    for (std::size_t i = 1; i < k; ++i) max_gap = std::max(max_gap, u_x[i] - target[i]);
    step.max_gap = max_gap;
    step.slide_steps = steps;
    step.gap_dichotomy = true;
    step.descent_nonpositive = removal.descent_nonpositive;
    verdict.elimination_trace.push_back(std::move(step));
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(removal.index));
  }
  verdict.status = CoreStatus::kInCore;
  check_verdict_budget(verdict, n);
  return verdict;
}

std::size_t least_valuable_agent(std::span<const double> x_star, std::span<const double> v_star) {
  if (x_star.size() != v_star.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "x* and v* differ in length");
  }
  if (std::none_of(v_star.begin(), v_star.end(), [](double v) { return v < 0.0; })) {
    throw Error(ErrorCode::kNoDescent, "v* has no negative coordinate");
  }
  for (std::size_t i = 0; i < x_star.size(); ++i) {
    if (x_star[i] <= 0.0 && v_star[i] <= 0.0) return i;
  }
  std::size_t best = x_star.size();
  double best_t = 0.0;
  for (std::size_t i = 0; i < x_star.size(); ++i) {
    if (v_star[i] >= 0.0) continue;
    const double t = x_star[i] / -v_star[i];
    if (best == x_star.size() || t < best_t) {
      best = i;
      best_t = t;
    }
  }
  return best;
}

LindahlResult lindahl_test(const UtilityOracle& oracle, const Outcome& a, double tol) {
  check_length(oracle, a.size());
  if (a.is_zero()) throw Error(ErrorCode::kDomainViolation, "the Lindahl test needs a != 0");
  LindahlResult out;
  const bool blocked = std::any_of(a.actions().begin(), a.actions().end(),
                                   [](double c) { return c >= 1.0; });
  out.direction_sign = blocked ? -1 : 1;
  Vector v = a.actions();
  for (double& c : v) c *= out.direction_sign;
  out.derivative = directional_derivative(oracle, a.values(), v);
  for (double d : out.derivative) out.norm = std::max(out.norm, std::abs(d));
  out.is_lindahl = out.norm <= tol;
  return out;
}

bool is_lindahl(const UtilityOracle& oracle, const Outcome& a, double tol) {
  return lindahl_test(oracle, a, tol).is_lindahl;
}

double not_in_core_strength(const UtilityOracle& oracle, const Outcome& a,
                            const CoreVerdict& verdict, const SolverConfig& cfg, Vector* witness) {
  check_length(oracle, a.size());
  const std::size_t n = oracle.agents();
  const Vector ua = evaluate(oracle, a);
  if (verdict.status == CoreStatus::kDeviationFound && verdict.deviation) {
    const Vector u = evaluate(oracle, verdict.deviation->point);
    double gain = 0.0;
    bool first = true;
    for (std::size_t i : verdict.deviation->coalition.members()) {
      gain = first ? u[i] - ua[i] : std::min(gain, u[i] - ua[i]);
      first = false;
    }
    if (witness) *witness = verdict.deviation->point.actions();
    return gain;
  }
  if (verdict.status == CoreStatus::kNotPareto) {
    SolverConfig exact = cfg;
    exact.mode = Mode::kExact;
    const GapSolve best = solve_gap_program(oracle, ua, Vector(n, 1.0), a.actions(), exact);
    if (witness) *witness = best.x;
    return best.value;
  }
  if (witness) witness->clear();
  return 0.0;
}

bool certificate_valid(const UtilityOracle& oracle, const Outcome& a, const CoreVerdict& verdict) {
  check_length(oracle, a.size());
  const std::size_t n = oracle.agents();
  const double tau = verdict.config.tau_dev;
  switch (verdict.status) {
    case CoreStatus::kDeviationFound: {
      if (!verdict.deviation) return false;
      const Deviation& d = *verdict.deviation;
      if (d.point.size() != n || d.coalition.universe() != n) return false;
      for (std::size_t i = 0; i < n; ++i) {
        if (!d.coalition.contains(i) && d.point[i] != 0.0) return false;
      }
      const Vector ua = evaluate(oracle, a);
      const Vector u = evaluate(oracle, d.point);
      for (std::size_t i : d.coalition.members()) {
        if (!(u[i] > ua[i] + tau)) return false;
      }
      return true;
    }
    case CoreStatus::kNotPareto: {
      if (!verdict.improving_direction || verdict.improving_direction->size() != n) return false;
      const Vector d =
          finite_difference_derivative(oracle, a.values(), verdict.improving_direction->values());
      return min_of(d) > 0.0;
    }
    case CoreStatus::kInCore:
      return verdict.elimination_trace.size() == n &&
             verdict.programs_solved <= program_budget(n, verdict.config.mode);
  }
  return false;
}

}  // namespace pgcore
