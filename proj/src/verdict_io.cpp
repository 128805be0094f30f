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

#include "pgcore/verdict_io.hpp"

#include "json.hpp"
#include "pgcore/error.hpp"

namespace pgcore {
namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::kConfigParseError, "verdict: " + what);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json config_json(const SolverConfig& cfg) {
  return json{{"epsilon", cfg.epsilon},
              {"tau_dev", cfg.tau_dev},
              {"max_iterations", cfg.max_iterations},
              {"seed", cfg.seed},
              {"mode", std::string(mode_name(cfg.mode))},
              {"eps_core", cfg.eps_core},
              {"kappa", cfg.kappa}};
}

SolverConfig config_from(const json& j) {
  SolverConfig cfg;
  cfg.epsilon = j.at("epsilon").get<double>();
  cfg.tau_dev = j.at("tau_dev").get<double>();
  cfg.max_iterations = j.at("max_iterations").get<std::size_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "exact") {
    cfg.mode = Mode::kExact;
  } else if (mode == "approx") {
    cfg.mode = Mode::kApprox;
  } else {
    parse_error("unknown mode '" + mode + "'");
  }
  cfg.eps_core = j.at("eps_core").get<double>();
  cfg.kappa = j.at("kappa").get<double>();
  return cfg;
}

std::optional<double> read_optional(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

std::string config_to_json(const SolverConfig& cfg) { return config_json(cfg).dump(); }

std::string verdict_to_json(const CoreVerdict& verdict, int indent) {
  json doc;
  doc["schema"] = std::string(kVerdictSchema);
  doc["status"] = std::string(core_status_name(verdict.status));
  doc["programs_solved"] = verdict.programs_solved;
  if (verdict.deviation) {
    doc["deviation"] = json{{"coalition", verdict.deviation->coalition.members()},
                            {"point", verdict.deviation->point.actions()}};
    doc["agents"] = verdict.deviation->coalition.universe();
  } else {
    doc["deviation"] = nullptr;
  }
  doc["improving_direction"] =
      verdict.improving_direction ? json(verdict.improving_direction->components()) : json(nullptr);
  json trace = json::array();
  for (const EliminationStep& s : verdict.elimination_trace) {
    trace.push_back(json{{"round", s.round},
                         {"agent", s.agent},
                         {"x_star", s.x_star},
                         {"v_star", s.v_star},
                         {"ratio", s.ratio},
                         {"program3_value", s.program3_value},
                         {"max_gap", s.max_gap},
                         {"slide_steps", s.slide_steps},
                         {"gap_dichotomy", s.gap_dichotomy},
                         {"descent_nonpositive", s.descent_nonpositive}});
  }
  doc["elimination_trace"] = std::move(trace);
  doc["up_value"] = optional_number(verdict.up_value);
  doc["down_value"] = optional_number(verdict.down_value);
  doc["slide_steps"] = verdict.slide_steps;
  doc["uncertified_solves"] = verdict.uncertified_solves;
  doc["config"] = config_json(verdict.config);
  return doc.dump(indent);
}

CoreVerdict parse_verdict(std::string_view text) {
  try {
    const json doc = json::parse(text.begin(), text.end());
    if (!doc.is_object()) parse_error("document must be a JSON object");
    if (doc.value("schema", std::string()) != kVerdictSchema) parse_error("unsupported schema");
    CoreVerdict v;
    const auto status = parse_core_status(doc.at("status").get<std::string>());
    if (!status) parse_error("unknown status");
    v.status = *status;
    v.programs_solved = doc.at("programs_solved").get<std::size_t>();
    if (!doc.at("deviation").is_null()) {
      const json& d = doc.at("deviation");
      const auto n = doc.at("agents").get<std::size_t>();
      v.deviation = Deviation{Coalition(d.at("coalition").get<std::vector<std::size_t>>(), n),
                              Outcome(d.at("point").get<Vector>())};
    }
    if (!doc.at("improving_direction").is_null()) {
      v.improving_direction = Direction(doc.at("improving_direction").get<Vector>());
    }
    for (const json& s : doc.at("elimination_trace")) {
      EliminationStep step;
      step.round = s.at("round").get<std::size_t>();
      step.agent = s.at("agent").get<std::size_t>();
      step.x_star = s.at("x_star").get<Vector>();
      step.v_star = s.at("v_star").get<Vector>();
      step.ratio = s.at("ratio").get<double>();
      step.program3_value = s.at("program3_value").get<double>();
      step.max_gap = s.at("max_gap").get<double>();
      step.slide_steps = s.at("slide_steps").get<std::size_t>();
      step.gap_dichotomy = s.at("gap_dichotomy").get<bool>();
      step.descent_nonpositive = s.at("descent_nonpositive").get<bool>();
      v.elimination_trace.push_back(std::move(step));
    }
    v.up_value = read_optional(doc, "up_value");
    v.down_value = read_optional(doc, "down_value");
    v.slide_steps = doc.at("slide_steps").get<std::size_t>();
    v.uncertified_solves = doc.at("uncertified_solves").get<std::size_t>();
    v.config = config_from(doc.at("config"));
    return v;
  } catch (const json::exception& e) {
    parse_error(e.what());
  }
}

}  // namespace pgcore
