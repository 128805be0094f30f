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

// Economy configuration files.
//
// An economy file is a UTF-8 JSON document:
//
//   {
//     "n": 2,
//     "family": "quadratic",            // affine | quadratic | logagg
//     "params": {
//       "W": [[0.5, 0.5], [0.5, 0.5]],  // n x n, all families
//       "c": [0.5, 0.5]                 // quadratic
//       // "alpha": [...], "beta": [...] for logagg
//     },
//     "seed": 7                         // optional
//   }
//
// Unknown fields, at the top level or inside "params", are rejected.

#ifndef PGCORE_ECONOMY_IO_HPP
#define PGCORE_ECONOMY_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "pgcore/families.hpp"

namespace pgcore {

/// Throws kConfigParseError on malformed text, unknown or missing fields,
/// and kInvalidEconomy when the parameters fail check_spec().
EconomySpec parse_economy(std::string_view text);
EconomySpec load_economy(const std::filesystem::path& path);

std::string economy_to_json(const EconomySpec& spec);

}  // namespace pgcore

#endif  // PGCORE_ECONOMY_IO_HPP
