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

#include "pgcore/groundtruth.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "pgcore/error.hpp"

namespace pgcore {
namespace {

// Gains at or below this count as no gain at all.
constexpr double kZeroGain = 1e-9;
constexpr double kMaxLatticePoints = 5e7;

void check_instance(const UtilityOracle& oracle, const Outcome& a, const GridSpec& grid) {
  grid.validate();
  const std::size_t n = oracle.agents();
  if (a.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "outcome length differs from the agent count");
  }
  if (n > kMaxGridAgents) {
    std::ostringstream os;
    os << "grid oracle handles at most " << kMaxGridAgents << " agents, got " << n;
    throw Error(ErrorCode::kInstanceTooLarge, os.str());
  }
  if (std::pow(static_cast<double>(grid.resolution), static_cast<double>(n)) > kMaxLatticePoints) {
    std::ostringstream os;
    os << "lattice of " << grid.resolution << "^" << n << " points is too large";
    throw Error(ErrorCode::kInstanceTooLarge, os.str());
  }
}

// Calls visit(x) for every grid point supported on `members`, in
// lexicographic order of the member coordinates (last member fastest).
template <typename Visit>
void for_each_point(const GridSpec& grid, std::size_t n, const std::vector<std::size_t>& members,
                    Visit&& visit) {
  std::vector<std::size_t> k(members.size(), 0);
  Vector x(n, 0.0);
  while (true) {
    visit(x);
    std::size_t pos = members.size();
    while (pos > 0) {
      --pos;
      if (++k[pos] < grid.resolution) {
        x[members[pos]] = grid.coordinate(k[pos]);
        break;
      }
      k[pos] = 0;
      x[members[pos]] = 0.0;
      if (pos == 0) return;
    }
    if (members.empty()) return;
  }
}

// Coalitions by increasing size, then lexicographically.
std::vector<std::vector<std::size_t>> coalitions_in_order(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t size = 1; size <= n; ++size) {
    std::vector<std::size_t> c(size);
    for (std::size_t i = 0; i < size; ++i) c[i] = i;
    while (true) {
      out.push_back(c);
      std::size_t pos = size;
      while (pos > 0 && c[pos - 1] == n - size + pos - 1) --pos;
      if (pos == 0) break;
      ++c[pos - 1];
      for (std::size_t i = pos; i < size; ++i) c[i] = c[i - 1] + 1;
    }
  }
  return out;
}

struct Scan {
  double best = -std::numeric_limits<double>::infinity();
  Vector best_point;
  std::optional<Vector> first_above;
  std::size_t points = 0;
};

// max over grid points on `members` of min_{i in members} u_i(x) - u_i(a).
Scan scan_coalition(const UtilityOracle& oracle, const Vector& ua, const GridSpec& grid,
                    const std::vector<std::size_t>& members, double threshold) {
  Scan s;
  for_each_point(grid, oracle.agents(), members, [&](const Vector& x) {
    ++s.points;
    const Vector u = evaluate(oracle, x);
    double gain = std::numeric_limits<double>::infinity();
    for (std::size_t i : members) gain = std::min(gain, u[i] - ua[i]);
    if (gain > s.best) {
      s.best = gain;
      s.best_point = x;
    }
    if (!s.first_above && gain > threshold) s.first_above = x;
  });
  return s;
}

Clause gain_clause(double gain, double margin) {
  // The clause is "no agent set gains", true when the gain is negligible.
  return Clause{gain <= kZeroGain, gain > kZeroGain && gain <= margin};
}

}  // namespace

GridSpec GridSpec::with_default_margin(std::size_t resolution) {
  GridSpec g;
  g.resolution = resolution;
  g.margin = g.default_margin();
  return g;
}

double GridSpec::default_margin() const {
  return resolution >= 2 ? 2.0 / static_cast<double>(resolution - 1) : 0.0;
}

double GridSpec::coordinate(std::size_t k) const {
  return k + 1 == resolution ? 1.0 : static_cast<double>(k) / static_cast<double>(resolution - 1);
}

void GridSpec::validate() const {
  if (resolution < 2) throw Error(ErrorCode::kInvalidConfig, "grid resolution must be >= 2");
  if (!(margin >= 0.0) || !std::isfinite(margin)) {
    throw Error(ErrorCode::kInvalidConfig, "grid margin must be finite and >= 0");
  }
}

BruteForceResult brute_force_core_test(const UtilityOracle& oracle, const Outcome& a,
                                       const GridSpec& grid) {
  check_instance(oracle, a, grid);
  const std::size_t n = oracle.agents();
  const Vector ua = evaluate(oracle, a);
  BruteForceResult out;
  out.strength = -std::numeric_limits<double>::infinity();
  for (const auto& members : coalitions_in_order(n)) {
    const Scan s = scan_coalition(oracle, ua, grid, members, grid.margin);
    out.points_scanned += s.points;
    if (!out.deviation && s.first_above) {
      out.deviation = Deviation{Coalition(members, n), Outcome(*s.first_above)};
    }
    if (s.best > out.strength) {
      out.strength = s.best;
      out.strongest = Deviation{Coalition(members, n), Outcome(s.best_point)};
    }
  }
  out.in_core = !out.deviation;
  return out;
}

ParetoIrResult brute_force_pareto_and_ir(const UtilityOracle& oracle, const Outcome& a,
                                         const GridSpec& grid) {
  check_instance(oracle, a, grid);
  const std::size_t n = oracle.agents();
  const Vector ua = evaluate(oracle, a);
  std::vector<std::size_t> everyone(n);
  for (std::size_t i = 0; i < n; ++i) everyone[i] = i;
  ParetoIrResult out;
  out.pareto_strength = scan_coalition(oracle, ua, grid, everyone, grid.margin).best;
  out.ir_strength = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    out.ir_strength = std::max(out.ir_strength, scan_coalition(oracle, ua, grid, {i}, grid.margin).best);
  }
  out.pareto = out.pareto_strength <= grid.margin;
  out.individually_rational = out.ir_strength <= grid.margin;
  return out;
}

std::size_t DominatedSetGrid::index_of(const std::vector<std::size_t>& coords) const {
  std::size_t index = 0;
  for (std::size_t c : coords) index = index * resolution + c;
  return index;
}

std::vector<std::size_t> DominatedSetGrid::coords_of(std::size_t index) const {
  std::vector<std::size_t> coords(agents);
  for (std::size_t d = agents; d > 0; --d) {
    coords[d - 1] = index % resolution;
    index /= resolution;
  }
  return coords;
}

bool DominatedSetGrid::member(const std::vector<std::size_t>& coords) const {
  return membership[index_of(coords)] != 0;
}

DominatedSetGrid build_dominated_set(const UtilityOracle& oracle, const Outcome& a,
                                     const GridSpec& grid, double slack) {
  check_instance(oracle, a, grid);
  const std::size_t n = oracle.agents();
  const Vector ua = evaluate(oracle, a);
  DominatedSetGrid d;
  d.agents = n;
  d.resolution = grid.resolution;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= grid.resolution;
  d.membership.assign(total, 0);
  d.component_labels.assign(total, -1);

  std::vector<std::size_t> everyone(n);
  for (std::size_t i = 0; i < n; ++i) everyone[i] = i;
  std::size_t index = 0;
  for_each_point(grid, n, everyone, [&](const Vector& x) {
    const Vector u = evaluate(oracle, x);
    bool dominated = true;
    for (std::size_t i = 0; i < n && dominated; ++i) dominated = u[i] <= ua[i] + slack;
    d.membership[index++] = dominated ? 1 : 0;
  });
  std::vector<std::size_t> nearest(n);
  for (std::size_t i = 0; i < n; ++i) {
    nearest[i] = static_cast<std::size_t>(std::lround(a[i] * static_cast<double>(grid.resolution - 1)));
  }
  d.membership[d.index_of(nearest)] = 1;

  std::int32_t next_label = 0;
  for (std::size_t seed = 0; seed < total; ++seed) {
    if (!d.membership[seed] || d.component_labels[seed] >= 0) continue;
    std::deque<std::size_t> queue{seed};
    d.component_labels[seed] = next_label;
    while (!queue.empty()) {
      const std::size_t at = queue.front();
      queue.pop_front();
      auto coords = d.coords_of(at);
      for (std::size_t axis = 0; axis < n; ++axis) {
        for (int step : {-1, 1}) {
          if ((step < 0 && coords[axis] == 0) || (step > 0 && coords[axis] + 1 == grid.resolution)) {
            continue;
          }
          coords[axis] += step;
          const std::size_t nb = d.index_of(coords);
          coords[axis] -= step;
          if (d.membership[nb] && d.component_labels[nb] < 0) {
            d.component_labels[nb] = next_label;
            queue.push_back(nb);
          }
        }
      }
    }
    ++next_label;
  }
  d.components = static_cast<std::size_t>(next_label);
  return d;
}

ConnectivityResult dominated_set_connected(const UtilityOracle& oracle, const Outcome& a,
                                           const GridSpec& grid, std::optional<double> slack) {
  const DominatedSetGrid d = build_dominated_set(oracle, a, grid, slack.value_or(grid.margin));
  ConnectivityResult out;
  out.components = d.components;
  out.connected = d.components <= 1;
  out.zero_is_member = d.membership.front() != 0;
  return out;
}

std::string_view theorem1_outcome_name(Theorem1Outcome outcome) {
  switch (outcome) {
    case Theorem1Outcome::kHolds:
      return "HOLDS";
    case Theorem1Outcome::kViolated:
      return "VIOLATED";
    case Theorem1Outcome::kSkipped:
      return "SKIPPED";
  }
  return "SKIPPED";
}

Theorem1Result theorem1_check(const UtilityOracle& oracle, const Outcome& a,
                              const GridSpec& grid) {
  Theorem1Result r;
  const BruteForceResult core = brute_force_core_test(oracle, a, grid);
  const ParetoIrResult pir = brute_force_pareto_and_ir(oracle, a, grid);
  const ConnectivityResult tight = dominated_set_connected(oracle, a, grid, grid.margin);
  const ConnectivityResult loose = dominated_set_connected(oracle, a, grid, 2.0 * grid.margin);

  r.core_strength = core.strength;
  r.pareto_strength = pir.pareto_strength;
  r.ir_strength = pir.ir_strength;
  r.components = tight.components;
  r.in_core = gain_clause(core.strength, grid.margin);
  r.pareto = gain_clause(pir.pareto_strength, grid.margin);
  r.individually_rational = gain_clause(pir.ir_strength, grid.margin);
  r.connected = Clause{tight.connected, tight.connected != loose.connected};

  // Try every resolution of the ambiguous clauses.
  const Clause* clauses[] = {&r.in_core, &r.pareto, &r.individually_rational, &r.connected};
  bool seen_true = false;
  bool seen_false = false;
  for (unsigned mask = 0; mask < 16; ++mask) {
    bool v[4];
    bool consistent = true;
    for (unsigned c = 0; c < 4; ++c) {
      const bool flipped = (mask >> c) & 1u;
      if (flipped && !clauses[c]->ambiguous) consistent = false;
      v[c] = clauses[c]->value != flipped;
    }
    if (!consistent) continue;
    ((v[0] == (v[1] && v[2] && v[3])) ? seen_true : seen_false) = true;
  }
  if (seen_true && seen_false) {
    r.outcome = Theorem1Outcome::kSkipped;
  } else {
    r.outcome = seen_true ? Theorem1Outcome::kHolds : Theorem1Outcome::kViolated;
  }
  return r;
}

}  // namespace pgcore
