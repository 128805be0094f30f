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

#ifndef PGCORE_ERROR_HPP
#define PGCORE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pgcore {

enum class ErrorCode {
  kDimensionMismatch,
  kDomainViolation,
  kBoundaryInfeasible,
  kNonFiniteDerivative,
  kEmptyCoalition,
  kInvalidCoalition,
  kInfeasibleSet,
  kInvalidProblem,
  kNoDescent,
  kInvalidEconomy,
  kSlideBudgetExhausted,
  kInstanceTooLarge,
  kConfigParseError,
  kInvalidConfig,
};

std::string_view error_code_name(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// A direction leaves the action box at the evaluation point. `agents` lists
// the coordinates that block it.
class BoundaryInfeasibleError : public Error {
 public:
  BoundaryInfeasibleError(std::vector<std::size_t> agents,
                          const std::string& what);

  const std::vector<std::size_t>& agents() const noexcept { return agents_; }

 private:
  std::vector<std::size_t> agents_;
};

}  // namespace pgcore

#endif  // PGCORE_ERROR_HPP
