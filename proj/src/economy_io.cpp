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

#include "pgcore/economy_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pgcore/error.hpp"

namespace pgcore {
namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::kConfigParseError, what);
}

void reject_unknown(const json& object, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& item : object.items()) {
    if (!allowed.contains(item.key())) {
      parse_error("unknown field '" + item.key() + "' in " + where);
    }
  }
}

Vector read_vector(const json& node, const std::string& name) {
  if (!node.is_array()) parse_error("'" + name + "' must be an array of numbers");
  Vector out;
  for (const auto& x : node) {
    if (!x.is_number()) parse_error("'" + name + "' must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Matrix read_matrix(const json& node, const std::string& name) {
  if (!node.is_array()) parse_error("'" + name + "' must be a nested array");
  Matrix out;
  for (const auto& row : node) out.push_back(read_vector(row, name));
  return out;
}

const json& require(const json& object, const std::string& key, const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) parse_error("missing field '" + key + "' in " + where);
  return *it;
}

}  // namespace

EconomySpec parse_economy(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    parse_error(std::string("malformed economy file: ") + e.what());
  }
  if (!doc.is_object()) parse_error("economy file must hold a JSON object");
  reject_unknown(doc, {"n", "family", "params", "seed"}, "economy file");

  EconomySpec spec;
  const json& n = require(doc, "n", "economy file");
  if (!n.is_number_unsigned() || n.get<std::uint64_t>() == 0) {
    parse_error("'n' must be a positive integer");
  }
  spec.n = n.get<std::size_t>();

  const json& family = require(doc, "family", "economy file");
  if (!family.is_string()) parse_error("'family' must be a string");
  auto parsed = parse_family(family.get<std::string>());
  if (!parsed) parse_error("unknown family '" + family.get<std::string>() + "'");
  spec.family = *parsed;

  const json& params = require(doc, "params", "economy file");
  if (!params.is_object()) parse_error("'params' must be an object");
  switch (spec.family) {
    case Family::kAffine:
      reject_unknown(params, {"W"}, "affine params");
      break;
    case Family::kQuadratic:
      reject_unknown(params, {"W", "c"}, "quadratic params");
      spec.curvature = read_vector(require(params, "c", "quadratic params"), "c");
      break;
    case Family::kLogAgg:
      reject_unknown(params, {"alpha", "W", "beta"}, "logagg params");
      spec.alpha = read_vector(require(params, "alpha", "logagg params"), "alpha");
      spec.beta = read_vector(require(params, "beta", "logagg params"), "beta");
      break;
  }
  spec.weights = read_matrix(require(params, "W", "params"), "W");

  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) parse_error("'seed' must be a non-negative integer");
    spec.seed = it->get<std::uint64_t>();
  }
  check_spec(spec);
  return spec;
}

EconomySpec load_economy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot open economy file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_economy(buffer.str());
}

std::string economy_to_json(const EconomySpec& spec) {
  json params = json::object();
  params["W"] = spec.weights;
  switch (spec.family) {
    case Family::kAffine: break;
    case Family::kQuadratic: params["c"] = spec.curvature; break;
    case Family::kLogAgg:
      params["alpha"] = spec.alpha;
      params["beta"] = spec.beta;
      break;
  }
  json doc = {{"n", spec.n}, {"family", std::string(family_name(spec.family))}, {"params", params}};
  if (spec.seed) doc["seed"] = *spec.seed;
  return doc.dump(2) + "\n";
}

}  // namespace pgcore
