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

// Verdict documents (schema "v1").
//
//   {
//     "schema": "v1",
//     "status": "IN_CORE" | "NOT_PARETO" | "DEVIATION_FOUND",
//     "programs_solved": 4,
//     "deviation": {"coalition": [0, 2], "point": [...]},   // or null
//     "improving_direction": [...],                          // or null
//     "elimination_trace": [{"round": 1, "agent": 1, "x_star": [...],
//                            "v_star": [...], "ratio": 0.5, ...}],
//     "up_value": 0.25, "down_value": -0.1,                   // or null
//     "slide_steps": 0, "uncertified_solves": 0,
//     "config": {"epsilon": 1e-06, "tau_dev": 1e-05, ...}
//   }

#ifndef PGCORE_VERDICT_IO_HPP
#define PGCORE_VERDICT_IO_HPP

#include <string>
#include <string_view>

#include "pgcore/coretest.hpp"

namespace pgcore {

inline constexpr std::string_view kVerdictSchema = "v1";

std::string verdict_to_json(const CoreVerdict& verdict, int indent = 2);

/// Inverse of verdict_to_json for the agent count recorded in the document.
/// Throws kConfigParseError on malformed or unknown-schema input.
CoreVerdict parse_verdict(std::string_view text);

std::string config_to_json(const SolverConfig& cfg);

}  // namespace pgcore

#endif  // PGCORE_VERDICT_IO_HPP
