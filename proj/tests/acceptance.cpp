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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every tolerance and sample size is pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "pgcore/cli.hpp"
#include "pgcore/coretest.hpp"
#include "pgcore/families.hpp"
#include "pgcore/groundtruth.hpp"
#include "pgcore/optimizer.hpp"

using namespace pgcore;

namespace {

// Criteria 1-4: instance set.
constexpr std::size_t kEconomies = 60;
constexpr std::uint64_t kEconomySeedBase = 1000;
constexpr std::size_t kUniformPoints = 2;
constexpr std::size_t kEfficientPoints = 3;
constexpr std::size_t kGridResolution = 21;
constexpr double kGridMargin = 0.1;
constexpr double kRuntimeLimitSeconds = 600.0;
constexpr double kSnap = 1e-4;
// Criterion 2: subsample at doubled resolution, default margin 2/(41-1).
constexpr std::size_t kSubsample = 10;
constexpr std::size_t kFineResolution = 41;
// Criterion 4.
constexpr double kFdStep = 1e-7;
// Criterion 5.
constexpr std::size_t kDerivativePairs = 100;
constexpr double kDerivativeRelTol = 1e-6;
constexpr std::uint64_t kDerivativeSeed = 5;
// Criterion 6.
constexpr std::size_t kSolverProblems = 20;
constexpr double kSolverTol = 1e-3;
constexpr std::size_t kDenseRes2 = 200;
constexpr std::size_t kDenseRes3 = 60;
constexpr std::size_t kZoomRounds = 12;
constexpr std::uint64_t kSolverSeed = 6;
// Criterion 7.
constexpr double kLindahlTol = 1e-6;
constexpr std::size_t kMinLindahlPoints = 3;
constexpr std::uint64_t kLindahlSeed = 7;
// Criterion 8.
constexpr double kEpsCore = 0.01;
constexpr std::size_t kApproxInstances = 10;
constexpr double kKappaSafety = 1.25;
constexpr std::uint64_t kApproxSeed = 8;

struct Instance {
  std::size_t economy = 0;
  EconomySpec spec;
  UtilityOracle oracle;
  Outcome point;
};

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

// Criterion lines, printed in order once everything has run.
std::string summary[9];

template <typename... Args>
void record(int criterion, const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  summary[criterion] = buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Family family_for(std::size_t e) {
  static constexpr Family kFamilies[] = {Family::kAffine, Family::kQuadratic, Family::kLogAgg};
  return kFamilies[e % 3];
}

// Maximizer of a weighted sum of utilities: a Pareto-efficient point.
Vector weighted_optimum(const UtilityOracle& o, const Vector& w) {
  const std::size_t n = o.agents();
  MaxMinProblem p;
  p.components = 1;
  p.feasible = FeasibleSet::box(Vector(n, 0.0), Vector(n, 1.0));
  p.values = [&](std::span<const double> x) {
    const Vector u = evaluate(o, x);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += w[i] * u[i];
    return Vector{total};
  };
  p.supergradient = [&](std::size_t, std::span<const double> x) {
    const Matrix j = jacobian(o, x);
    Vector g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) g[k] += w[i] * j[i][k];
    }
    return g;
  };
  Vector x = solve_maxmin(p, SolverConfig{}).argmax;
  // Optima on a face land a few solver tolerances away from it.
  for (double& c : x) {
    if (c < kSnap) c = 0.0;
    if (c > 1.0 - kSnap) c = 1.0;
  }
  return x;
}

std::vector<Instance> build_instances() {
  std::vector<Instance> out;
  for (std::size_t e = 0; e < kEconomies; ++e) {
    const std::size_t n = 2 + e % 2;
    const std::uint64_t seed = kEconomySeedBase + e;
    EconomySpec spec = random_economy(family_for(e), n, seed);
    const UtilityOracle o = make_oracle(spec);
    std::printf("  economy %2zu: %-9s n=%zu seed=%llu\n", e,
                std::string(family_name(spec.family)).c_str(), n,
                static_cast<unsigned long long>(seed));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t k = 0; k < kUniformPoints; ++k) {
      Vector p(n);
      for (double& c : p) c = unit(rng);
      out.push_back({e, spec, o, Outcome(p)});
    }
    for (std::size_t k = 0; k < kEfficientPoints; ++k) {
      Vector w(n);
      double total = 0.0;
      for (double& c : w) total += c = unit(rng) + 0.05;
      for (double& c : w) c /= total;
      out.push_back({e, spec, o, Outcome(weighted_optimum(o, w))});
    }
  }
  return out;
}

// Test-side forward difference, independent of the library's estimator.
Vector forward_difference(const UtilityOracle& o, const Outcome& a, const Direction& v) {
  const std::size_t n = a.size();
  double h = kFdStep;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] > 0.0) h = std::min(h, (1.0 - a[i]) / v[i]);
    if (v[i] < 0.0) h = std::min(h, a[i] / -v[i]);
  }
  Vector shifted(a.actions());
  for (std::size_t i = 0; i < n; ++i) shifted[i] = std::clamp(a[i] + h * v[i], 0.0, 1.0);
  const Vector u0 = evaluate(o, a);
  const Vector u1 = evaluate(o, shifted);
  Vector d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = (u1[i] - u0[i]) / h;
  return d;
}

struct CertificateTally {
  std::size_t deviations = 0;
  std::size_t deviations_ok = 0;
  std::size_t not_pareto = 0;
  std::size_t not_pareto_ok = 0;

  void add(const UtilityOracle& o, const Outcome& a, const CoreVerdict& v) {
    const double tau = v.config.tau_dev;
    if (v.status == CoreStatus::kDeviationFound) {
      ++deviations;
      if (!v.deviation) return;
      const Deviation& d = *v.deviation;
      bool ok = d.point.size() == a.size();
      for (std::size_t i = 0; ok && i < a.size(); ++i) {
        ok = d.coalition.contains(i) || d.point[i] == 0.0;
      }
      if (!ok) return;
      const Vector ua = evaluate(o, a);
      const Vector ud = evaluate(o, d.point);
      for (std::size_t i : d.coalition.members()) ok = ok && ud[i] - ua[i] >= tau;
      if (ok) ++deviations_ok;
    } else if (v.status == CoreStatus::kNotPareto) {
      ++not_pareto;
      if (!v.improving_direction) return;
      const Vector d = forward_difference(o, a, *v.improving_direction);
      if (*std::min_element(d.begin(), d.end()) > tau) ++not_pareto_ok;
    }
  }
  bool pass() const { return deviations_ok == deviations && not_pareto_ok == not_pareto; }
};

struct BudgetTally {
  std::size_t runs = 0;
  std::size_t violations = 0;
  std::size_t worst = 0;

  void add(const CoreVerdict& v, std::size_t n) {
    if (v.config.mode != Mode::kExact) return;
    ++runs;
    worst = std::max(worst, v.programs_solved);
    if (v.programs_solved > 2 + 2 * n) ++violations;
  }
};

// Criterion 6 helpers.
struct AffineMaxMin {
  Matrix r;
  Vector s;
  Vector lo;
  Vector hi;

  double value(std::span<const double> x) const {
    double best = INFINITY;
    for (std::size_t i = 0; i < r.size(); ++i) {
      double g = s[i];
      for (std::size_t j = 0; j < x.size(); ++j) g += r[i][j] * x[j];
      best = std::min(best, g);
    }
    return best;
  }
};

double grid_max(const AffineMaxMin& f, const Vector& lo, const Vector& hi, std::size_t res,
                Vector& arg) {
  const std::size_t n = lo.size();
  std::vector<std::size_t> k(n, 0);
  double best = -INFINITY;
  Vector x(n);
  while (true) {
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = lo[j] + (hi[j] - lo[j]) * static_cast<double>(k[j]) / static_cast<double>(res - 1);
    }
    const double v = f.value(x);
    if (v > best) {
      best = v;
      arg = x;
    }
    std::size_t j = n;
    while (j > 0 && ++k[j - 1] == res) k[--j] = 0;
    if (j == 0) break;
  }
  return best;
}

// Dense grid over the box, then the same grid on windows shrinking around
// the incumbent.
double dense_grid_optimum(const AffineMaxMin& f, std::size_t res) {
  Vector arg;
  double best = grid_max(f, f.lo, f.hi, res, arg);
  Vector width(f.lo.size());
  for (std::size_t j = 0; j < width.size(); ++j) width[j] = (f.hi[j] - f.lo[j]) / (res - 1);
  for (std::size_t round = 0; round < kZoomRounds; ++round) {
    Vector lo(arg.size()), hi(arg.size());
    for (std::size_t j = 0; j < arg.size(); ++j) {
      lo[j] = std::max(f.lo[j], arg[j] - 2.0 * width[j]);
      hi[j] = std::min(f.hi[j], arg[j] + 2.0 * width[j]);
      width[j] = (hi[j] - lo[j]) / (res - 1);
    }
    Vector cand;
    const double v = grid_max(f, lo, hi, res, cand);
    if (v > best) {
      best = v;
      arg = cand;
    }
  }
  return best;
}

// Exact LP optimum by enumerating basic solutions of max t, t <= g_i(x), lo <= x <= hi.
double vertex_optimum(const AffineMaxMin& f) {
  const std::size_t n = f.lo.size();
  Matrix rows;
  Vector rhs;
  for (std::size_t i = 0; i < f.r.size(); ++i) {
    Vector row(n + 1);
    for (std::size_t j = 0; j < n; ++j) row[j] = -f.r[i][j];
    row[n] = 1.0;
    rows.push_back(row);
    rhs.push_back(f.s[i]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (double b : {f.lo[j], f.hi[j]}) {
      Vector row(n + 1, 0.0);
      row[j] = 1.0;
      rows.push_back(row);
      rhs.push_back(b);
    }
  }
  const std::size_t m = rows.size();
  std::vector<bool> pick(m, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n + 1), true);
  double best = -INFINITY;
  do {
    Matrix a;
    Vector b;
    for (std::size_t i = 0; i < m; ++i) {
      if (pick[i]) {
        a.push_back(rows[i]);
        b.push_back(rhs[i]);
      }
    }
    const std::size_t k = n + 1;
    bool singular = false;
    for (std::size_t c = 0; c < k && !singular; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < k; ++r) {
        if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
      }
      if (std::abs(a[p][c]) < 1e-12) {
        singular = true;
        break;
      }
      std::swap(a[p], a[c]);
      std::swap(b[p], b[c]);
      for (std::size_t r = 0; r < k; ++r) {
        if (r == c) continue;
        const double q = a[r][c] / a[c][c];
        for (std::size_t j = c; j < k; ++j) a[r][j] -= q * a[c][j];
        b[r] -= q * b[c];
      }
    }
    if (singular) continue;
    Vector y(k);
    for (std::size_t r = 0; r < k; ++r) y[r] = b[r] / a[r][r];
    bool feasible = true;
    for (std::size_t j = 0; j < n; ++j) {
      feasible = feasible && y[j] >= f.lo[j] - 1e-9 && y[j] <= f.hi[j] + 1e-9;
    }
    if (feasible && y[n] <= f.value(std::span<const double>(y.data(), n)) + 1e-9) {
      best = std::max(best, y[n]);
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

// ---------------------------------------------------------------------------

bool criteria_1_to_4(std::vector<Instance>& instances, BudgetTally& budget,
                     CertificateTally& certs) {
  const auto start = std::chrono::steady_clock::now();
  const GridSpec grid{kGridResolution, kGridMargin};
  const SolverConfig cfg;

  std::size_t agree = 0, skipped = 0, mismatches = 0;
  std::size_t holds = 0, t1_skipped = 0, violated = 0, uncertified = 0;
  std::vector<bool> skipped_at_21(instances.size());
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const Instance& in = instances[k];
    const CompareResult r = compare(in.oracle, in.point, cfg, grid);
    budget.add(r.verdict, in.oracle.agents());
    certs.add(in.oracle, in.point, r.verdict);
    uncertified += r.verdict.uncertified_solves;
    if (r.skipped) {
      ++skipped;
    } else if (r.agree) {
      ++agree;
    } else {
      ++mismatches;
      std::printf("  mismatch: economy %zu point %zu: algorithm %s (gain %.3g), grid gain %.3g\n",
                  in.economy, k, std::string(core_status_name(r.verdict.status)).c_str(),
                  r.algorithm_strength, r.oracle.strength);
    }
    switch (r.theorem1.outcome) {
      case Theorem1Outcome::kHolds: ++holds; break;
      case Theorem1Outcome::kSkipped: ++t1_skipped; break;
      case Theorem1Outcome::kViolated:
        ++violated;
        std::printf("  characterisation violated: economy %zu point %zu\n", in.economy, k);
        break;
    }
    skipped_at_21[k] = r.theorem1.outcome == Theorem1Outcome::kSkipped;
  }
  const double elapsed = seconds_since(start);
  const std::size_t total = instances.size();
  const bool c1 = mismatches == 0 && kEconomies >= 50 && elapsed < kRuntimeLimitSeconds;
  record(1, "criterion 1 %s: agreement on %zu/%zu non-skipped instances, skipped %zu/%zu "
              "(%.1f%%), %zu economies, %zu uncertified solves, %.1f s (limit %.0f s)",
              verdict(c1), agree, agree + mismatches, skipped, total,
              100.0 * static_cast<double>(skipped) / static_cast<double>(total), kEconomies,
              uncertified, elapsed, kRuntimeLimitSeconds);

  // Half the subsample from instances skipped at the base resolution, the
  // rest spread evenly over the set.
  std::vector<std::size_t> subsample;
  for (std::size_t k = 0; k < total && subsample.size() < kSubsample / 2; ++k) {
    if (skipped_at_21[k]) subsample.push_back(k);
  }
  const std::size_t stride = total / kSubsample;
  for (std::size_t s = 0; subsample.size() < kSubsample && s < total; ++s) {
    const std::size_t k = (s % kSubsample) * stride + s / kSubsample;
    if (!skipped_at_21[k]) subsample.push_back(k);
  }
  std::size_t coarse_skips = 0, fine_skips = 0, fine_violated = 0;
  const GridSpec fine = GridSpec::with_default_margin(kFineResolution);
  for (std::size_t k : subsample) {
    const Instance& in = instances[k];
    const Theorem1Result t = theorem1_check(in.oracle, in.point, fine);
    coarse_skips += skipped_at_21[k];
    fine_skips += t.outcome == Theorem1Outcome::kSkipped;
    fine_violated += t.outcome == Theorem1Outcome::kViolated;
    std::printf("  subsample %zu (economy %zu): res %zu %s, res %zu %s\n", k, in.economy,
                kGridResolution, skipped_at_21[k] ? "SKIPPED" : "decided", kFineResolution,
                std::string(theorem1_outcome_name(t.outcome)).c_str());
  }
  const bool c2 = violated == 0 && fine_violated == 0 && fine_skips <= coarse_skips;
  record(2, "criterion 2 %s: Pareto+IR+connected characterisation holds on %zu/%zu non-skipped instances (skipped %zu); "
              "subsample skipped %zu at res %zu -> %zu at res %zu, %zu violated",
              verdict(c2), holds, holds + violated, t1_skipped, coarse_skips, kGridResolution,
              fine_skips, kFineResolution, fine_violated);
  return c1 && c2;
}

bool criterion_5() {
  std::mt19937_64 rng(kDerivativeSeed);
  std::uniform_real_distribution<double> inner(0.05, 0.95);
  std::uniform_real_distribution<double> dir(-1.0, 1.0);
  bool pass = true;
  std::string detail;
  for (Family f : {Family::kAffine, Family::kQuadratic, Family::kLogAgg}) {
    double worst = 0.0;
    std::size_t failures = 0;
    for (std::size_t k = 0; k < kDerivativePairs; ++k) {
      const std::size_t n = 2 + k % 2;
      const UtilityOracle o = make_oracle(random_economy(f, n, kDerivativeSeed * 1000 + k));
      Vector a(n), v(n);
      for (double& c : a) c = inner(rng);
      for (double& c : v) c = dir(rng);
      const Vector analytic = directional_derivative(o, a, v);
      const Vector fd = finite_difference_derivative(o, a, v);
      for (std::size_t i = 0; i < n; ++i) {
        const double rel = std::abs(fd[i] - analytic[i]) / std::abs(analytic[i]);
        worst = std::max(worst, rel);
        if (!(rel < kDerivativeRelTol)) ++failures;
      }
    }
    pass = pass && failures == 0;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s%s max rel err %.2e", detail.empty() ? "" : ", ",
                  std::string(family_name(f)).c_str(), worst);
    detail += buf;
  }
  record(5, "criterion 5 %s: %zu (point, direction) pairs per family; %s (tol %.0e)",
              verdict(pass), kDerivativePairs, detail.c_str(), kDerivativeRelTol);
  return pass;
}

bool criterion_6() {
  std::mt19937_64 rng(kSolverSeed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> low(0.0, 0.4);
  std::uniform_real_distribution<double> high(0.6, 1.0);
  double worst = 0.0, worst_exact = 0.0;
  for (std::size_t k = 0; k < kSolverProblems; ++k) {
    const std::size_t n = 2 + k % 2;
    const std::size_t m = 2 + k % 3;
    AffineMaxMin f;
    f.r.assign(m, Vector(n));
    f.s.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (double& c : f.r[i]) c = coef(rng);
      f.s[i] = 0.5 * coef(rng);
    }
    for (std::size_t j = 0; j < n; ++j) {
      f.lo.push_back(low(rng));
      f.hi.push_back(high(rng));
    }
    MaxMinProblem p;
    p.components = m;
    p.feasible = FeasibleSet::box(f.lo, f.hi);
    p.values = [&f, m](std::span<const double> x) {
      Vector out(m);
      for (std::size_t i = 0; i < m; ++i) {
        out[i] = f.s[i];
        for (std::size_t j = 0; j < x.size(); ++j) out[i] += f.r[i][j] * x[j];
      }
      return out;
    };
    p.supergradient = [&f](std::size_t i, std::span<const double>) { return f.r[i]; };
    const SolveResult r = solve_maxmin(p, SolverConfig{});
    const double grid = dense_grid_optimum(f, n == 2 ? kDenseRes2 : kDenseRes3);
    const double exact = vertex_optimum(f);
    worst = std::max(worst, std::abs(r.value - grid));
    worst_exact = std::max(worst_exact, std::abs(r.value - exact));
  }
  const bool pass = worst <= kSolverTol;
  record(6, "criterion 6 %s: %zu affine box problems, max |solver - dense grid| %.2e "
              "(tol %.0e; grids %zu and %zu per axis), max |solver - exact LP| %.2e",
              verdict(pass), kSolverProblems, worst, kSolverTol, kDenseRes2, kDenseRes3,
              worst_exact);
  return pass;
}

bool criterion_7() {
  struct Point {
    std::string label;
    UtilityOracle oracle;
    Outcome a;
  };
  std::vector<Point> points;
  points.push_back({"quadratic W=0.5 c=0.5 at (1,1)",
                    make_quadratic({{0.5, 0.5}, {0.5, 0.5}}, {0.5, 0.5}), Outcome({1.0, 1.0})});

  std::mt19937_64 rng(kLindahlSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < 8; ++k) {
    const std::size_t n = 2 + k % 2;
    EconomySpec spec = random_economy(k < 4 ? Family::kQuadratic : Family::kLogAgg, n,
                                      kLindahlSeed * 100 + k);
    Vector a(n);
    for (double& c : a) c = 0.3 + 0.6 * unit(rng);
    // Tune the own-action cost so that d_a u(a) = 0.
    for (std::size_t i = 0; i < n; ++i) {
      double wa = 0.0;
      for (std::size_t j = 0; j < n; ++j) wa += spec.weights[i][j] * a[j];
      if (spec.family == Family::kQuadratic) {
        spec.curvature[i] = wa / (2.0 * a[i] * a[i]);
      } else {
        spec.beta[i] = spec.alpha[i] * wa / ((1.0 + wa) * a[i]);
      }
    }
    points.push_back({std::string(family_name(spec.family)) + " n=" + std::to_string(n) +
                          " seed " + std::to_string(kLindahlSeed * 100 + k),
                      make_oracle(spec), Outcome(a)});
  }

  // Random samples too, kept only if they happen to qualify.
  for (std::size_t k = 0; k < 200; ++k) {
    const UtilityOracle o = make_oracle(random_economy(Family::kQuadratic, 2, 9000 + k));
    points.push_back({"random sample", o, Outcome({unit(rng), unit(rng)})});
  }

  const GridSpec grid = GridSpec::with_default_margin(kFineResolution);
  std::size_t lindahl = 0, in_core = 0;
  for (const Point& p : points) {
    const LindahlResult l = lindahl_test(p.oracle, p.a, kLindahlTol);
    if (!l.is_lindahl) continue;
    ++lindahl;
    const BruteForceResult b = brute_force_core_test(p.oracle, p.a, grid);
    in_core += b.in_core;
    std::printf("  lindahl point: %s, |d u|_inf %.1e, grid gain %.3g, %s\n", p.label.c_str(),
                l.norm, b.strength, b.in_core ? "IN_CORE" : "DEVIATION");
  }
  const bool pass = lindahl >= kMinLindahlPoints && in_core == lindahl;
  record(7, "criterion 7 %s: %zu/%zu Lindahl points pass the grid core test (res %zu, "
              "margin %.2f; at least %zu required)",
              verdict(pass), in_core, lindahl, kFineResolution, grid.margin, kMinLindahlPoints);
  return pass;
}

bool criterion_8(BudgetTally& budget, CertificateTally& certs) {
  std::mt19937_64 rng(kApproxSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const GridSpec grid{kGridResolution, 2.0 * kEpsCore};

  std::size_t dev_found = 0, dev_total = 0, core_found = 0, core_total = 0;
  std::size_t worst_slide = 0, budget_breaches = 0;
  auto run_approx = [&](const UtilityOracle& o, const Outcome& a, std::size_t seed,
                        bool expect_deviation) {
    const double kappa = kKappaSafety * validate_economy(o, 1000, seed).estimated_kappa;
    const SolverConfig cfg = SolverConfig::approx(kEpsCore, kappa);
    const CoreVerdict v = test_core_membership(o, a, cfg);
    certs.add(o, a, v);
    const std::size_t bound = slide_budget(o.agents(), cfg);
    worst_slide = std::max(worst_slide, v.slide_steps);
    if (v.slide_steps > bound) ++budget_breaches;
    const bool ok = expect_deviation ? v.status == CoreStatus::kDeviationFound
                                     : v.status == CoreStatus::kInCore;
    std::printf("  approx %s instance seed %zu: %s, slide steps %zu (bound %zu, kappa %.3f)\n",
                expect_deviation ? "deviation" : "core", seed,
                std::string(core_status_name(v.status)).c_str(), v.slide_steps, bound, kappa);
    return ok;
  };

  // Deviation instances: the grid certifies a gain of at least 2 eps_core
  // for every member of some coalition by direct evaluation.
  for (std::size_t seed = kApproxSeed * 100; dev_total < kApproxInstances; ++seed) {
    const std::size_t n = 2 + seed % 2;
    const UtilityOracle o = make_oracle(random_economy(family_for(seed), n, seed));
    Vector p(n);
    for (double& c : p) c = 0.5 * unit(rng);
    const Outcome a(p);
    const BruteForceResult b = brute_force_core_test(o, a, grid);
    if (b.in_core || b.strength < 2.0 * kEpsCore) continue;
    ++dev_total;
    dev_found += run_approx(o, a, seed, true);
  }

  // Core instances: the exact algorithm says IN_CORE and the grid finds no
  // gain at all.
  for (std::size_t seed = kApproxSeed * 100 + 50; core_total < kApproxInstances; ++seed) {
    const std::size_t n = 2 + seed % 2;
    const UtilityOracle o = make_oracle(random_economy(family_for(seed), n, seed));
    Vector w(n);
    double total = 0.0;
    for (double& c : w) total += c = unit(rng) + 0.05;
    for (double& c : w) c /= total;
    const Outcome a(weighted_optimum(o, w));
    const CoreVerdict exact = test_core_membership(o, a, SolverConfig{});
    budget.add(exact, n);
    if (exact.status != CoreStatus::kInCore) continue;
    if (brute_force_core_test(o, a, grid).strength > 0.0) continue;
    ++core_total;
    core_found += run_approx(o, a, seed, false);
  }

  const bool pass = dev_found == dev_total && core_found == core_total && budget_breaches == 0;
  record(8, "criterion 8 %s: DEVIATION_FOUND on %zu/%zu certified deviations, IN_CORE on "
              "%zu/%zu certified core points, eps_core %.2f, max slide steps %zu, %zu over the "
              "slide bound",
              verdict(pass), dev_found, dev_total, core_found, core_total, kEpsCore, worst_slide,
              budget_breaches);
  return pass;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  std::printf("instance set (criteria 1-4): %zu economies x %zu points\n", kEconomies,
              kUniformPoints + kEfficientPoints);
  std::vector<Instance> instances = build_instances();

  BudgetTally budget;
  CertificateTally certs;
  bool ok = criteria_1_to_4(instances, budget, certs);

  // Extra exact runs on the engineered pair-deviation instance.
  const UtilityOracle overwork =
      make_logagg({3, 3, 3}, {{0.3, 2, 0.1}, {2, 0.3, 0.1}, {2, 2, 0.3}}, {5, 5, 0.1});
  const Outcome a({0.45, 0.45, 1.0});
  const CoreVerdict v = test_core_membership(overwork, a, SolverConfig{});
  budget.add(v, 3);
  certs.add(overwork, a, v);

  const bool c5 = criterion_5();
  const bool c6 = criterion_6();
  const bool c7 = criterion_7();
  const bool c8 = criterion_8(budget, certs);

  const bool c3 = budget.violations == 0 && budget.runs > 0;
  record(3, "criterion 3 %s: %zu exact-mode runs, largest programs_solved %zu, %zu over "
              "2 + 2n",
              verdict(c3), budget.runs, budget.worst, budget.violations);
  const bool c4 = certs.pass() && certs.deviations > 0 && certs.not_pareto > 0;
  record(4, "criterion 4 %s: %zu/%zu DEVIATION_FOUND certificates re-validate (gain >= "
              "tau_dev), %zu/%zu NOT_PARETO directions re-validate by finite differences",
              verdict(c4), certs.deviations_ok, certs.deviations, certs.not_pareto_ok,
              certs.not_pareto);

  ok = ok && c3 && c4 && c5 && c6 && c7 && c8;
  for (int c = 1; c <= 8; ++c) std::printf("%s\n", summary[c].c_str());
  std::printf("acceptance %s in %.1f s\n", ok ? "PASS" : "FAIL", seconds_since(start));
  return ok ? 0 : 1;
}
