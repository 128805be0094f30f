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

#include "pgcore/error.hpp"

namespace pgcore {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDomainViolation: return "DomainViolation";
    case ErrorCode::kBoundaryInfeasible: return "BoundaryInfeasible";
    case ErrorCode::kNonFiniteDerivative: return "NonFiniteDerivative";
    case ErrorCode::kEmptyCoalition: return "EmptyCoalition";
    case ErrorCode::kInvalidCoalition: return "InvalidCoalition";
    case ErrorCode::kInfeasibleSet: return "InfeasibleSet";
    case ErrorCode::kInvalidProblem: return "InvalidProblem";
    case ErrorCode::kNoDescent: return "NoDescent";
    case ErrorCode::kInvalidEconomy: return "InvalidEconomy";
    case ErrorCode::kSlideBudgetExhausted: return "SlideBudgetExhausted";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kConfigParseError: return "ConfigParseError";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
      code_(code) {}

BoundaryInfeasibleError::BoundaryInfeasibleError(
    std::vector<std::size_t> agents, const std::string& what)
    : Error(ErrorCode::kBoundaryInfeasible, what), agents_(std::move(agents)) {}

}  // namespace pgcore
