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

#include "pgcore/optimizer.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <limits>
#include <numeric>

#include "pgcore/error.hpp"

namespace pgcore {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTolerance = 1e-12;
constexpr std::size_t kPhaseLength = 100;
constexpr std::size_t kBoundIterations = 4000;
constexpr std::size_t kMaxNearActive = 8;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

[[noreturn]] void bad_problem(const std::string& what) {
  throw Error(ErrorCode::kInvalidProblem, what);
}

Vector checked_values(const MaxMinProblem& problem, std::span<const double> x) {
  Vector v = problem.values(x);
  if (v.size() != problem.components) bad_problem("values() returned the wrong number of components");
  for (double g : v) {
    if (!std::isfinite(g)) bad_problem("objective component is not finite on the feasible set");
  }
  return v;
}

Vector checked_supergradient(const MaxMinProblem& problem, std::size_t i,
                             std::span<const double> x) {
  Vector s = problem.supergradient(i, x);
  if (s.size() != problem.feasible.dimension()) bad_problem("supergradient has the wrong length");
  for (double g : s) {
    if (!std::isfinite(g)) bad_problem("supergradient is not finite");
  }
  return s;
}

std::size_t active_component(const Vector& values) {
  const double lowest = *std::min_element(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= lowest + kTieTolerance) return i;
  }
  return 0;
}

void check_problem(const MaxMinProblem& problem) {
  if (problem.components < 1) bad_problem("a max-min problem needs at least one component");
  if (!problem.values || !problem.supergradient) bad_problem("missing values/supergradient callables");
  if (problem.start && problem.start->size() != problem.feasible.dimension()) {
    bad_problem("start point has the wrong dimension");
  }
}

struct Iterate {
  Vector x;
  Vector values;
  double f = 0.0;
};

Iterate make_iterate(const MaxMinProblem& problem, Vector x) {
  Iterate it;
  it.values = checked_values(problem, x);
  it.f = *std::min_element(it.values.begin(), it.values.end());
  it.x = std::move(x);
  return it;
}

// Euclidean projection of s onto the tangent cone of the set at x.
Vector tangent_component(const FeasibleSet& set, std::span<const double> x, Vector s) {
  if (set.kind() == FeasibleSet::Kind::kBox) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if ((s[j] > 0.0 && x[j] >= set.hi()[j]) || (s[j] < 0.0 && x[j] <= set.lo()[j])) s[j] = 0.0;
    }
    return s;
  }
  // In mirrored coordinates the cone is {d : sum d = 0, d_j >= 0 where x_j = 0}.
  // The projection is d_j = g_j - theta off the zero set and max(g_j - theta, 0)
  // on it, with theta the root of the decreasing function sum_j d_j(theta).
  const double sign = set.sign();
  std::vector<double> free_g;
  std::vector<double> pinned_g;
  for (std::size_t j = 0; j < s.size(); ++j) {
    (sign * x[j] <= 0.0 ? pinned_g : free_g).push_back(sign * s[j]);
  }
  if (free_g.empty()) return Vector(s.size(), 0.0);
  double free_sum = std::accumulate(free_g.begin(), free_g.end(), 0.0);
  std::sort(pinned_g.begin(), pinned_g.end(), std::greater<>());
  // With the k largest pinned entries positive: theta = (free_sum + top_k) / (F + k).
  double theta = free_sum / static_cast<double>(free_g.size());
  double top = 0.0;
  for (std::size_t k = 0; k < pinned_g.size(); ++k) {
    if (pinned_g[k] <= theta) break;
    top += pinned_g[k];
    theta = (free_sum + top) / static_cast<double>(free_g.size() + k + 1);
  }
  Vector d(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double g = sign * s[j] - theta;
    d[j] = sign * (sign * x[j] <= 0.0 ? std::max(g, 0.0) : g);
  }
  return d;
}

// Weights on the simplex minimizing |sum_k lambda_k s_{subset_k}|, from the
// equality-constrained normal equations. Empty when the system is singular
// or the solution leaves the simplex.
std::optional<Vector> min_norm_weights(const Matrix& slopes,
                                       const std::vector<std::size_t>& subset) {
  const std::size_t k = subset.size();
  // [G 1; 1^T 0] [lambda; nu] = [0; 1]
  Matrix a(k + 1, Vector(k + 2, 0.0));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) a[r][c] = dot(slopes[subset[r]], slopes[subset[c]]);
    a[r][k] = 1.0;
    a[k][r] = 1.0;
  }
  a[k][k + 1] = 1.0;
  for (std::size_t col = 0; col <= k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r <= k; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-300) return std::nullopt;
    std::swap(a[col], a[pivot]);
    for (std::size_t r = 0; r <= k; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      const double factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= k + 1; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  Vector lambda(k);
  double total = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    lambda[r] = a[r][k + 1] / a[r][r];
    if (!std::isfinite(lambda[r]) || lambda[r] < 0.0) return std::nullopt;
    total += lambda[r];
  }
  if (!(total > 0.0)) return std::nullopt;
  for (double& l : lambda) l /= total;
  return lambda;
}

enum class PhaseEnd { kReached, kUnreachable, kStalled, kOptimal };

// Solves a * z = b in place by partial pivoting; false when singular.
bool solve_dense(Matrix a, Vector b, Vector& z) {
  const std::size_t k = b.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (!(std::abs(a[pivot][col]) > 0.0)) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < k; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < k; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  z.assign(k, 0.0);
  for (std::size_t r = k; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < k; ++c) acc -= a[r][c] * z[c];
    z[r] = acc / a[r][r];
  }
  return true;
}

// Active-set polish of the cut weights: minimizes mu^T G mu / 2 - b^T mu over
// mu >= 0 with G the (slightly regularized) Gram matrix, starting from the
// coordinate-ascent point. Coordinate ascent crawls when two slopes are
// nearly antiparallel, which is exactly the ridge case. Keeps the input on
// any numerical trouble.
void refine_weights(const Matrix& slopes, const Vector& rhs, Vector& mu) {
  const std::size_t m = slopes.size();
  if (m < 2) return;
  Matrix g(m, Vector(m));
  double trace = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) g[i][j] = dot(slopes[i], slopes[j]);
    trace += g[i][i];
  }
  for (std::size_t i = 0; i < m; ++i) g[i][i] += 1e-13 * trace;
  auto objective = [&](const Vector& w) {
    double q = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      q -= rhs[i] * w[i];
      for (std::size_t j = 0; j < m; ++j) q += 0.5 * w[i] * g[i][j] * w[j];
    }
    return q;
  };

  Vector x = mu;
  std::vector<bool> passive(m);
  for (std::size_t i = 0; i < m; ++i) passive[i] = x[i] > 0.0;
  for (std::size_t round = 0; round < 4 * m + 4; ++round) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i) {
      if (passive[i]) idx.push_back(i);
    }
    if (idx.empty()) {
      // Enter the most violated cut.
      std::size_t enter = m;
      double worst = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (rhs[i] > worst) {
          worst = rhs[i];
          enter = i;
        }
      }
      if (enter == m) break;
      passive[enter] = true;
      continue;
    }
    Matrix sub(idx.size(), Vector(idx.size()));
    Vector sub_b(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      for (std::size_t c = 0; c < idx.size(); ++c) sub[r][c] = g[idx[r]][idx[c]];
      sub_b[r] = rhs[idx[r]];
    }
    Vector z;
    if (!solve_dense(sub, sub_b, z)) return;
    bool interior = true;
    for (double v : z) interior = interior && v > 0.0;
    if (interior) {
      for (std::size_t i = 0; i < m; ++i) x[i] = 0.0;
      for (std::size_t r = 0; r < idx.size(); ++r) x[idx[r]] = z[r];
      // Optimal once no inactive cut would gain from entering.
      std::size_t enter = m;
      double best_gain = 1e-15 * (1.0 + trace);
      for (std::size_t i = 0; i < m; ++i) {
        if (passive[i]) continue;
        double gain = rhs[i];
        for (std::size_t j = 0; j < m; ++j) gain -= g[i][j] * x[j];
        if (gain > best_gain) {
          best_gain = gain;
          enter = i;
        }
      }
      if (enter == m) break;
      passive[enter] = true;
      continue;
    }
    // Walk toward z until the first weight reaches zero, and drop it.
    double alpha = 1.0;
    std::size_t blocking = idx.size();
    for (std::size_t r = 0; r < idx.size(); ++r) {
      const double from = x[idx[r]];
      if (z[r] > 0.0) continue;
      const double t = from - z[r] > 0.0 ? from / (from - z[r]) : 0.0;
      if (t < alpha || blocking == idx.size()) {
        alpha = t;
        blocking = r;
      }
    }
    for (std::size_t r = 0; r < idx.size(); ++r) x[idx[r]] += alpha * (z[r] - x[idx[r]]);
    x[idx[blocking]] = 0.0;
    passive[idx[blocking]] = false;
  }
  for (double v : x) {
    if (!(v >= 0.0) || !std::isfinite(v)) return;
  }
  if (objective(x) <= objective(mu)) mu = x;
}

// Weights mu >= 0 maximizing sum mu_i b_i - |sum mu_i s_i|^2 / 2, by cyclic
// coordinate ascent. Any mu >= 0 yields a valid aggregated cut.
Vector cut_weights(const Matrix& slopes, const Vector& rhs, std::size_t first) {
  const std::size_t m = slopes.size();
  const std::size_t d = slopes.front().size();
  Vector mu(m, 0.0);
  Vector w(d, 0.0);
  Vector sq(m);
  for (std::size_t i = 0; i < m; ++i) sq[i] = dot(slopes[i], slopes[i]);
  mu[first] = rhs[first] / sq[first];
  for (std::size_t j = 0; j < d; ++j) w[j] = mu[first] * slopes[first][j];
  if (m == 1) return mu;
  for (int sweep = 0; sweep < 200; ++sweep) {
    double moved = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double next = std::max(0.0, mu[i] + (rhs[i] - dot(slopes[i], w)) / sq[i]);
      const double change = next - mu[i];
      if (change == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) w[j] += change * slopes[i][j];
      mu[i] = next;
      moved = std::max(moved, std::abs(change) * std::sqrt(sq[i]));
    }
    if (moved <= 1e-14) break;
  }
  refine_weights(slopes, rhs, mu);
  return mu;
}

// Appends the set's bounds that `trial` violates as cuts n.(y - x) >= b.
// Each holds on the whole set. Returns false when nothing was added.
bool add_crossed_bounds(const FeasibleSet& set, std::span<const double> x,
                        std::span<const double> trial, std::vector<bool>& joined,
                        Matrix& slopes, Vector& rhs) {
  const std::size_t n = x.size();
  bool added = false;
  for (std::size_t j = 0; j < n; ++j) {
    if (joined[j]) continue;
    Vector normal(n, 0.0);
    double bound = 0.0;
    if (set.kind() == FeasibleSet::Kind::kBox) {
      if (trial[j] < set.lo()[j]) {
        normal[j] = 1.0;
        bound = set.lo()[j] - x[j];
      } else if (trial[j] > set.hi()[j]) {
        normal[j] = -1.0;
        bound = x[j] - set.hi()[j];
      } else {
        continue;
      }
    } else {
      // sign * y_j >= 0, with the normal kept inside the sum-preserving plane.
      const double sign = set.sign();
      if (sign * trial[j] >= 0.0) continue;
      for (double& c : normal) c = -sign / static_cast<double>(n);
      normal[j] += sign;
      bound = -sign * x[j];
    }
    joined[j] = true;
    slopes.push_back(std::move(normal));
    rhs.push_back(bound);
    added = true;
  }
  return added;
}

// Projected cut steps aimed at `level`, starting from `best`. Every
// component contributes the cut g_i(x) + s_i.(y - x) >= level,
// which any y in the level set satisfies; the step projects x onto a
// nonnegative combination of these cuts and then onto the set. Each step
// moves x closer to every point of the level set, so once the accumulated
// squared movement exceeds diameter^2 the level is proven unreachable.
// `upper` is lowered whenever a step proves a smaller bound on max f.
PhaseEnd polyak_phase(const MaxMinProblem& problem, double level, std::size_t max_steps,
                      double diameter, std::size_t budget, std::size_t& iterations,
                      Iterate& best, double& upper) {
  const FeasibleSet& set = problem.feasible;
  Iterate cur = best;
  double travelled = 0.0;
  for (std::size_t k = 0; k < max_steps && iterations < budget; ++k) {
    ++iterations;
    const std::size_t active = active_component(cur.values);
    if (cur.f >= level) return PhaseEnd::kReached;
    Matrix slopes;
    Vector rhs;
    std::size_t first = 0;
    for (std::size_t i = 0; i < cur.values.size(); ++i) {
      // The tangent-cone part of a supergradient still bounds g_i over the
      // set, and it wastes no step length on the faces.
      Vector s = tangent_component(set, cur.x, checked_supergradient(problem, i, cur.x));
      if (dot(s, s) == 0.0) {
        if (cur.values[i] >= level) continue;  // the cut holds everywhere
        // g_i(y) <= g_i(x) on the whole set.
        upper = std::min(upper, cur.values[i]);
        if (i == active) {
          best = cur;
          return PhaseEnd::kOptimal;
        }
        return PhaseEnd::kUnreachable;
      }
      if (i == active) first = slopes.size();
      slopes.push_back(std::move(s));
      rhs.push_back(level - cur.values[i]);
    }
    // Bounds of the set that the step would cross join the projection as
    // halfspaces; without them the iterate zigzags off and back onto a face.
    std::vector<bool> joined(cur.x.size(), false);
    Vector dir;
    double need = 0.0;
    double dir_sq = 0.0;
    Vector trial(cur.x.size());
    for (std::size_t pass = 0; pass <= cur.x.size(); ++pass) {
      const Vector mu = cut_weights(slopes, rhs, first);
      dir.assign(cur.x.size(), 0.0);
      need = 0.0;
      for (std::size_t i = 0; i < slopes.size(); ++i) {
        need += mu[i] * rhs[i];
        for (std::size_t j = 0; j < dir.size(); ++j) dir[j] += mu[i] * slopes[i][j];
      }
      dir_sq = dot(dir, dir);
      if (dir_sq == 0.0) break;
      for (std::size_t j = 0; j < trial.size(); ++j) {
        trial[j] = cur.x[j] + need / dir_sq * dir[j];
      }
      if (!add_crossed_bounds(set, cur.x, trial, joined, slopes, rhs)) break;
    }
    if (need <= 0.0) return PhaseEnd::kStalled;
    if (dir_sq == 0.0) return PhaseEnd::kUnreachable;  // the combined cut is infeasible
    const double step = need / dir_sq;
    travelled += step * need;
    Vector next = project_onto(set, trial);
    if (next == cur.x) return PhaseEnd::kStalled;
    cur = make_iterate(problem, std::move(next));
    if (cur.f > best.f) best = cur;
    if (best.f >= level) return PhaseEnd::kReached;
    if (travelled > diameter * diameter) {
      upper = std::min(upper, level);
      return PhaseEnd::kUnreachable;
    }
  }
  return PhaseEnd::kStalled;
}

SolveResult finish(const MaxMinProblem& problem, Iterate best, std::size_t iterations,
                   bool certified, double gap) {
  SolveResult result;
  const Vector values = checked_values(problem, best.x);
  result.value = *std::min_element(values.begin(), values.end());
  result.argmax = std::move(best.x);
  result.iterations = iterations;
  result.budget_exhausted = !certified;
  result.certified_gap = certified ? gap : kInf;
  return result;
}

// Target-level ascent. `upper` is a proven upper bound on max f. Each phase
// aims at best + delta; delta halves when a phase stalls.
SolveResult ascend(const MaxMinProblem& problem, const SolverConfig& cfg) {
  const FeasibleSet& set = problem.feasible;
  Iterate best =
      make_iterate(problem, project_onto(set, problem.start ? *problem.start : set.center()));
  const double diameter = set.diameter();
  if (diameter == 0.0) return finish(problem, std::move(best), 0, true, 0.0);

  std::size_t iterations = 0;
  double upper = maxmin_upper_bound(problem, best.x);
  double delta = 0.5 * (upper - best.f);
  while (iterations < cfg.max_iterations) {
    const double gap = std::max(0.0, upper - best.f);
    if (gap <= cfg.epsilon) return finish(problem, std::move(best), iterations, true, gap);
    delta = std::min(delta, 0.5 * gap);
    if (delta < 1e-15 * (1.0 + std::abs(best.f))) break;
    const double level = best.f + delta;
    switch (polyak_phase(problem, level, kPhaseLength, diameter, cfg.max_iterations,
                         iterations, best, upper)) {
      case PhaseEnd::kOptimal:
        return finish(problem, std::move(best), iterations, true, 0.0);
      case PhaseEnd::kUnreachable:
        delta = 0.5 * (upper - best.f);
        break;
      case PhaseEnd::kReached:
        upper = std::min(upper, maxmin_upper_bound(problem, best.x));
        break;
      case PhaseEnd::kStalled:
        upper = std::min(upper, maxmin_upper_bound(problem, best.x));
        delta *= 0.5;
        break;
    }
  }
  const double gap = std::max(0.0, upper - best.f);
  return finish(problem, std::move(best), iterations, gap <= cfg.epsilon, gap);
}

// Uncertified variant for the dual weights: Polyak steps toward a fixed
// target, keeping the best point.
Vector ascend_to(const MaxMinProblem& problem, double target, std::size_t budget) {
  const FeasibleSet& set = problem.feasible;
  Iterate best =
      make_iterate(problem, project_onto(set, problem.start ? *problem.start : set.center()));
  const double diameter = set.diameter();
  if (diameter == 0.0) return best.x;
  std::size_t iterations = 0;
  double level = target;
  while (iterations < budget) {
    const double before = best.f;
    double unused = kInf;
    const PhaseEnd end = polyak_phase(problem, level, kPhaseLength, diameter, budget,
                                      iterations, best, unused);
    if (end == PhaseEnd::kOptimal || end == PhaseEnd::kReached) break;
    // Target out of reach: aim halfway between the best value and it.
    if (end == PhaseEnd::kUnreachable || best.f <= before) level = 0.5 * (best.f + level);
  }
  return best.x;
}

}  // namespace

FeasibleSet FeasibleSet::box(Vector lo, Vector hi) {
  if (lo.empty() || lo.size() != hi.size()) {
    throw Error(ErrorCode::kInfeasibleSet, "box bounds must be nonempty and of equal length");
  }
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || lo[i] > hi[i]) {
      throw Error(ErrorCode::kInfeasibleSet, "box needs finite lo <= hi in every coordinate");
    }
  }
  FeasibleSet set;
  set.kind_ = Kind::kBox;
  set.dimension_ = lo.size();
  set.lo_ = std::move(lo);
  set.hi_ = std::move(hi);
  return set;
}

FeasibleSet FeasibleSet::signed_simplex(int sign, std::size_t dimension) {
  if ((sign != 1 && sign != -1) || dimension == 0) {
    throw Error(ErrorCode::kInfeasibleSet, "signed simplex needs sign +-1 and dimension >= 1");
  }
  FeasibleSet set;
  set.kind_ = Kind::kSignedSimplex;
  set.dimension_ = dimension;
  set.sign_ = sign;
  return set;
}

bool FeasibleSet::contains(std::span<const double> x, double tol) const {
  if (x.size() != dimension_) return false;
  if (kind_ == Kind::kBox) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
    }
    return true;
  }
  double sum = 0.0;
  for (double c : x) {
    if (sign_ * c < -tol) return false;
    sum += c;
  }
  return std::abs(sum - sign_) <= tol * std::max<double>(1.0, static_cast<double>(x.size()));
}

double FeasibleSet::diameter() const {
  if (kind_ == Kind::kBox) {
    double s = 0.0;
    for (std::size_t i = 0; i < dimension_; ++i) s += (hi_[i] - lo_[i]) * (hi_[i] - lo_[i]);
    return std::sqrt(s);
  }
  return dimension_ > 1 ? std::sqrt(2.0) : 0.0;
}

Vector FeasibleSet::center() const {
  if (kind_ == Kind::kBox) {
    Vector c(dimension_);
    for (std::size_t i = 0; i < dimension_; ++i) c[i] = 0.5 * (lo_[i] + hi_[i]);
    return c;
  }
  return Vector(dimension_, sign_ / static_cast<double>(dimension_));
}

double FeasibleSet::support(std::span<const double> w) const {
  return dot(w, support_point(w));
}

Vector FeasibleSet::support_point(std::span<const double> w) const {
  if (kind_ == Kind::kBox) {
    Vector y(dimension_);
    for (std::size_t i = 0; i < dimension_; ++i) y[i] = w[i] >= 0.0 ? hi_[i] : lo_[i];
    return y;
  }
  // Vertices are sign * e_j.
  std::size_t best = 0;
  for (std::size_t j = 1; j < dimension_; ++j) {
    if (sign_ * w[j] > sign_ * w[best]) best = j;
  }
  Vector y(dimension_, 0.0);
  y[best] = sign_;
  return y;
}

Vector project_onto(const FeasibleSet& set, std::span<const double> x) {
  if (x.size() != set.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "projection input has the wrong dimension");
  }
  if (set.kind() == FeasibleSet::Kind::kBox) {
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], set.lo()[i], set.hi()[i]);
    return out;
  }
  const double sign = set.sign();
  Vector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = sign * x[i];
  Vector sorted = y;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    running += sorted[j];
    const double candidate = (running - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = sign * std::max(y[i] - theta, 0.0);
  return out;
}

double maxmin_upper_bound(const MaxMinProblem& problem, std::span<const double> x) {
  // For weights lambda on the simplex and linearizations l_i(y) = c_i + s_i.y
  // that dominate g_i on the set:
  //   max_y min_i g_i(y) <= max_y sum_i lambda_i l_i(y)
  //                       = sum_i lambda_i c_i + support(sum_i lambda_i s_i).
  // Any lambda gives a valid bound. Candidates come from min-norm
  // combinations over subsets of the near-active components, and from an
  // inner ascent over all of lambda.
  const std::size_t m = problem.components;
  const FeasibleSet& set = problem.feasible;
  const Vector values = checked_values(problem, x);
  Matrix slopes(m);
  Vector offsets(m);
  for (std::size_t i = 0; i < m; ++i) {
    slopes[i] = tangent_component(set, x, checked_supergradient(problem, i, x));
    offsets[i] = values[i] - dot(slopes[i], x);
  }
  auto combined = [&](std::span<const double> lambda) {
    Vector w(set.dimension(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < w.size(); ++j) w[j] += lambda[i] * slopes[i][j];
    }
    return w;
  };
  auto bound_at = [&](std::span<const double> lambda) {
    return dot(lambda, offsets) + set.support(combined(lambda));
  };
  if (m == 1) return bound_at(Vector{1.0});

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double lowest = values[order.front()];
  double bound = kInf;
  for (std::size_t i = 0; i < m; ++i) {
    Vector e(m, 0.0);
    e[i] = 1.0;
    bound = std::min(bound, bound_at(e));
  }
  const std::size_t near = std::min<std::size_t>(m, kMaxNearActive);
  for (std::uint32_t mask = 1; mask < (1u << near); ++mask) {
    if (std::popcount(mask) < 2) continue;
    std::vector<std::size_t> subset;
    for (std::size_t k = 0; k < near; ++k) {
      if (mask & (1u << k)) subset.push_back(order[k]);
    }
    const auto lambda = min_norm_weights(slopes, subset);
    if (!lambda) continue;
    Vector full(m, 0.0);
    for (std::size_t k = 0; k < subset.size(); ++k) full[subset[k]] = (*lambda)[k];
    bound = std::min(bound, bound_at(full));
  }

  MaxMinProblem dual;
  dual.components = 1;
  dual.feasible = FeasibleSet::signed_simplex(1, m);
  dual.values = [&](std::span<const double> lambda) { return Vector{-bound_at(lambda)}; };
  dual.supergradient = [&](std::size_t, std::span<const double> lambda) {
    const Vector y = set.support_point(combined(lambda));
    Vector g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = -(offsets[i] + dot(slopes[i], y));
    return g;
  };
  // Start with the weight on the components that are active at x.
  Vector start(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) start[i] = values[i] <= lowest + 1e-9 ? 1.0 : 0.0;
  const double active = std::accumulate(start.begin(), start.end(), 0.0);
  for (double& l : start) l /= active;
  dual.start = start;
  // The bound can never drop below the value at x; aim there.
  bound = std::min(bound, bound_at(ascend_to(dual, -lowest, kBoundIterations)));
  return bound;
}

SolveResult solve_maxmin(const MaxMinProblem& problem, const SolverConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw Error(ErrorCode::kInvalidConfig, "epsilon must be > 0");
  if (cfg.max_iterations < 1) throw Error(ErrorCode::kInvalidConfig, "max_iterations must be >= 1");
  check_problem(problem);
  return ascend(problem, cfg);
}

}  // namespace pgcore
