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

#include "pgcore/solver_config.hpp"

#include <cmath>
#include <sstream>

#include "pgcore/error.hpp"

namespace pgcore {

std::string_view mode_name(Mode mode) { return mode == Mode::kExact ? "exact" : "approx"; }

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); };
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail("epsilon must be > 0");
  if (!(tau_dev > 0.0) || !std::isfinite(tau_dev)) fail("tau_dev must be > 0");
  if (tau_dev < 10.0 * epsilon) {
    std::ostringstream os;
    os << "tau_dev (" << tau_dev << ") must be at least 10x epsilon (" << epsilon << ")";
    fail(os.str());
  }
  if (max_iterations < 1) fail("max_iterations must be >= 1");
  if (mode == Mode::kApprox) {
    if (!(eps_core > 0.0) || !std::isfinite(eps_core)) fail("approx mode needs eps_core > 0");
    if (!(kappa > 0.0) || !std::isfinite(kappa)) fail("approx mode needs kappa > 0");
  }
}

SolverConfig SolverConfig::approx(double eps_core, double kappa) {
  SolverConfig cfg;
  cfg.mode = Mode::kApprox;
  cfg.eps_core = eps_core;
  cfg.kappa = kappa;
  return cfg;
}

}  // namespace pgcore
