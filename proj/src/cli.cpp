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

#include "pgcore/cli.hpp"

#include <charconv>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pgcore/economy_io.hpp"
#include "pgcore/error.hpp"
#include "pgcore/families.hpp"
#include "pgcore/verdict_io.hpp"

namespace pgcore {
namespace {

using nlohmann::json;

constexpr std::size_t kDefaultValidationSamples = 1000;

struct Options {
  std::string economy;
  std::string point;
  double epsilon = SolverConfig{}.epsilon;
  double tau_dev = SolverConfig{}.tau_dev;
  std::size_t max_iterations = SolverConfig{}.max_iterations;
  std::string mode = "exact";
  std::optional<double> eps_core;
  std::optional<double> kappa;
  std::size_t grid_res = 21;
  std::optional<double> margin;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  std::size_t samples = kDefaultValidationSamples;
  bool json = false;
};

std::string format_vector(std::span<const double> v) {
  std::ostringstream os;
  os << std::setprecision(10) << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

json deviation_json(const std::optional<Deviation>& d) {
  if (!d) return nullptr;
  return json{{"coalition", d->coalition.members()}, {"point", d->point.actions()}};
}

json clause_json(const Clause& c) { return json{{"value", c.value}, {"ambiguous", c.ambiguous}}; }

GridSpec grid_from(const Options& o) {
  GridSpec g = GridSpec::with_default_margin(o.grid_res);
  if (o.margin) g.margin = *o.margin;
  g.validate();
  return g;
}

SolverConfig config_from(const Options& o, const UtilityOracle& oracle) {
  SolverConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.tau_dev = o.tau_dev;
  cfg.max_iterations = o.max_iterations;
  cfg.seed = o.seed;
  if (o.mode == "approx") {
    cfg.mode = Mode::kApprox;
    if (!o.eps_core) throw Error(ErrorCode::kInvalidConfig, "--mode approx needs --eps-core");
    cfg.eps_core = *o.eps_core;
    // Without --kappa, fall back to the sampled gradient bound.
    cfg.kappa = o.kappa ? *o.kappa
                        : validate_economy(oracle, kDefaultValidationSamples, o.seed).estimated_kappa;
  } else if (o.mode != "exact") {
    throw Error(ErrorCode::kInvalidConfig, "--mode must be exact or approx");
  }
  cfg.validate();
  return cfg;
}

struct Loaded {
  EconomySpec spec;
  UtilityOracle oracle;
};

Loaded load(const Options& o) {
  EconomySpec spec = load_economy(o.economy);
  UtilityOracle oracle = make_oracle(spec);
  return {std::move(spec), std::move(oracle)};
}

Outcome point_for(const Options& o, const UtilityOracle& oracle) {
  Vector p = parse_point(o.point);
  if (p.size() != oracle.agents()) {
    std::ostringstream os;
    os << "point has " << p.size() << " coordinates but the economy has " << oracle.agents()
       << " agents";
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
  return Outcome(std::move(p));
}

void print_verdict(const CoreVerdict& v, std::size_t n, std::ostream& out) {
  out << "status: " << core_status_name(v.status) << '\n';
  out << "programs_solved: " << v.programs_solved << " (budget "
      << program_budget(n, v.config.mode) << ")\n";
  if (v.deviation) {
    out << "deviation: coalition " << v.deviation->coalition.to_string() << " at "
        << format_vector(v.deviation->point.values()) << '\n';
  }
  if (v.improving_direction) {
    out << "improving_direction: " << format_vector(v.improving_direction->values()) << '\n';
  }
  for (const EliminationStep& s : v.elimination_trace) {
    out << "round " << s.round << ": removed agent " << s.agent << ", x* "
        << format_vector(s.x_star);
    if (!s.v_star.empty()) out << ", v* " << format_vector(s.v_star) << ", ratio " << s.ratio;
    if (v.config.mode == Mode::kApprox) out << ", slide steps " << s.slide_steps;
    out << '\n';
  }
  if (v.uncertified_solves > 0) {
    out << "note: " << v.uncertified_solves << " solve(s) ended without a certified gap\n";
  }
}

int cmd_check(const Options& o, std::ostream& out) {
  const Loaded e = load(o);
  const Outcome a = point_for(o, e.oracle);
  const CoreVerdict v = test_core_membership(e.oracle, a, config_from(o, e.oracle));
  if (o.json) {
    out << verdict_to_json(v) << '\n';
  } else {
    print_verdict(v, e.oracle.agents(), out);
  }
  return kExitOk;
}

int cmd_pareto(const Options& o, std::ostream& out) {
  const Loaded e = load(o);
  const Outcome a = point_for(o, e.oracle);
  const SolverConfig cfg = config_from(o, e.oracle);
  const ParetoResult r = pareto_preprocess(e.oracle, a, cfg);
  const bool improving = r.status == ParetoStatus::kImproving;
  if (o.json) {
    json doc{{"schema", std::string(kVerdictSchema)},
             {"command", "pareto"},
             {"status", improving ? "IMPROVING" : "EFFICIENT"},
             {"direction", r.direction ? json(r.direction->components()) : json(nullptr)},
             {"up_value", r.up_value ? json(*r.up_value) : json(nullptr)},
             {"down_value", r.down_value ? json(*r.down_value) : json(nullptr)},
             {"programs_solved", r.programs_solved},
             {"config", json::parse(config_to_json(cfg))}};
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out << "status: " << (improving ? "IMPROVING" : "EFFICIENT") << '\n';
  out << std::setprecision(10);
  out << "up program: ";
  if (r.up_value) out << *r.up_value << '\n'; else out << "blocked\n";
  out << "down program: ";
  if (r.down_value) out << *r.down_value << '\n'; else out << "blocked\n";
  if (r.direction) out << "direction: " << format_vector(r.direction->values()) << '\n';
  return kExitOk;
}

int cmd_lindahl(const Options& o, std::ostream& out) {
  const Loaded e = load(o);
  const Outcome a = point_for(o, e.oracle);
  const LindahlResult r = lindahl_test(e.oracle, a, o.tol);
  if (o.json) {
    json doc{{"schema", std::string(kVerdictSchema)},
             {"command", "lindahl"},
             {"is_lindahl", r.is_lindahl},
             {"derivative", r.derivative},
             {"norm", r.norm},
             {"direction_sign", r.direction_sign},
             {"tol", o.tol}};
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out << "lindahl: " << (r.is_lindahl ? "true" : "false") << '\n';
  out << (r.direction_sign > 0 ? "d_a u(a): " : "d_{-a} u(a): ") << format_vector(r.derivative)
      << '\n';
  out << std::setprecision(10) << "max norm: " << r.norm << " (tol " << o.tol << ")\n";
  return kExitOk;
}

json bruteforce_json(const BruteForceResult& r, const GridSpec& g) {
  return json{{"in_core", r.in_core},
              {"deviation", deviation_json(r.deviation)},
              {"strength", r.strength},
              {"strongest", deviation_json(r.strongest)},
              {"points_scanned", r.points_scanned},
              {"grid", json{{"resolution", g.resolution}, {"margin", g.margin}}}};
}

int cmd_bruteforce(const Options& o, std::ostream& out) {
  const Loaded e = load(o);
  const Outcome a = point_for(o, e.oracle);
  const GridSpec g = grid_from(o);
  const BruteForceResult r = brute_force_core_test(e.oracle, a, g);
  if (o.json) {
    json doc = bruteforce_json(r, g);
    doc["schema"] = std::string(kVerdictSchema);
    doc["command"] = "bruteforce";
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out << "status: " << (r.in_core ? "IN_CORE" : "DEVIATION") << '\n';
  if (r.deviation) {
    out << "deviation: coalition " << r.deviation->coalition.to_string() << " at "
        << format_vector(r.deviation->point.values()) << '\n';
  }
  out << std::setprecision(10) << "strongest gain: " << r.strength << '\n';
  out << "grid: " << g.resolution << " points per axis, margin " << g.margin << ", "
      << r.points_scanned << " points scanned\n";
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
  const Loaded e = load(o);
  const Outcome a = point_for(o, e.oracle);
  const GridSpec g = grid_from(o);
  const CompareResult r = compare(e.oracle, a, config_from(o, e.oracle), g);
  const Theorem1Result& t = r.theorem1;
  if (o.json) {
    json doc{{"schema", std::string(kVerdictSchema)},
             {"command", "compare"},
             {"algorithm", json::parse(verdict_to_json(r.verdict))},
             {"algorithm_strength", r.algorithm_strength},
             {"witness", r.witness},
             {"oracle", bruteforce_json(r.oracle, g)},
             {"theorem1",
              json{{"outcome", std::string(theorem1_outcome_name(t.outcome))},
                   {"in_core", clause_json(t.in_core)},
                   {"pareto", clause_json(t.pareto)},
                   {"individually_rational", clause_json(t.individually_rational)},
                   {"connected", clause_json(t.connected)},
                   {"components", t.components},
                   {"core_strength", t.core_strength},
                   {"pareto_strength", t.pareto_strength},
                   {"ir_strength", t.ir_strength}}},
             {"agree", r.agree},
             {"skipped", r.skipped}};
    out << doc.dump(2) << '\n';
  } else {
    auto clause = [](const Clause& c) {
      return std::string(c.value ? "true" : "false") + (c.ambiguous ? " (ambiguous)" : "");
    };
    out << std::setprecision(10);
    out << "algorithm: " << core_status_name(r.verdict.status) << ", gain "
        << r.algorithm_strength << '\n';
    out << "oracle: " << (r.oracle.in_core ? "IN_CORE" : "DEVIATION") << ", gain "
        << r.oracle.strength << '\n';
    out << "agreement: " << (r.agree ? "true" : "false") << (r.skipped ? " (skipped)" : "")
        << '\n';
    out << "characterisation: " << theorem1_outcome_name(t.outcome) << '\n';
    out << "  in core: " << clause(t.in_core) << '\n';
    out << "  pareto: " << clause(t.pareto) << '\n';
    out << "  individually rational: " << clause(t.individually_rational) << '\n';
    out << "  dominated set connected: " << clause(t.connected) << ", " << t.components
        << " component(s)\n";
  }
  return r.mismatch() ? kExitMismatch : kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const Loaded e = load(o);
  if (o.samples == 0) throw Error(ErrorCode::kInvalidConfig, "--samples must be >= 1");
  const EconomyValidationReport r = validate_economy(e.oracle, o.samples, o.seed);
  if (o.json) {
    json conc = json::array();
    for (const auto& c : r.concavity_violations) {
      conc.push_back(json{{"first", c.first},
                          {"second", c.second},
                          {"agent", c.agent},
                          {"midpoint_gap", c.midpoint_gap}});
    }
    json ext = json::array();
    for (const auto& x : r.externality_violations) {
      ext.push_back(json{{"higher", x.higher}, {"lower", x.lower}, {"agent", x.agent}});
    }
    json doc{{"schema", std::string(kVerdictSchema)},
             {"command", "validate"},
             {"valid", r.valid()},
             {"samples_checked", r.samples_checked},
             {"estimated_kappa", r.estimated_kappa},
             {"range_warnings", r.range_warnings},
             {"concavity_violations", conc},
             {"externality_violations", ext}};
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out << "valid: " << (r.valid() ? "true" : "false") << '\n';
  out << "samples checked: " << r.samples_checked << '\n';
  out << std::setprecision(10) << "estimated kappa: " << r.estimated_kappa << '\n';
  out << "concavity violations: " << r.concavity_violations.size() << '\n';
  out << "externality violations: " << r.externality_violations.size() << '\n';
  out << "utilities outside [0,1]: " << r.range_warnings << '\n';
  return kExitOk;
}

}  // namespace

Vector parse_point(std::string_view text) {
  Vector out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    std::string_view part = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    if (!part.empty() && part.front() == '+') part.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc() || end != part.data() + part.size()) {
      throw Error(ErrorCode::kConfigParseError,
                  "cannot read '" + std::string(part) + "' as a number in --point");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

CompareResult compare(const UtilityOracle& oracle, const Outcome& a, const SolverConfig& cfg,
                      const GridSpec& grid) {
  CompareResult r;
  r.verdict = test_core_membership(oracle, a, cfg);
  r.algorithm_strength = not_in_core_strength(oracle, a, r.verdict, cfg, &r.witness);
  r.oracle = brute_force_core_test(oracle, a, grid);
  r.theorem1 = theorem1_check(oracle, a, grid);
  const bool algorithm_in_core = r.verdict.status == CoreStatus::kInCore;
  r.agree = algorithm_in_core == r.oracle.in_core;
  r.skipped = (r.oracle.strength > cfg.tau_dev && r.oracle.strength <= grid.margin) ||
              (!algorithm_in_core && r.algorithm_strength <= grid.margin);
  return r;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Core membership tests for public goods economies", "pgcore"};
  app.require_subcommand(1);
  Options o;

  auto add_economy = [&](CLI::App* sub) {
    sub->add_option("--economy", o.economy, "Economy file (JSON)")->required();
  };
  auto add_point = [&](CLI::App* sub) {
    sub->add_option("--point", o.point, "Outcome as comma-separated actions")->required();
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--epsilon", o.epsilon, "Solver accuracy");
    sub->add_option("--tau-dev", o.tau_dev, "Strictness margin for verdicts");
    sub->add_option("--max-iterations", o.max_iterations, "Iteration cap per solve");
    sub->add_option("--mode", o.mode, "exact or approx")->check(CLI::IsMember({"exact", "approx"}));
    sub->add_option("--eps-core", o.eps_core, "Approximate mode: deviation size to detect");
    sub->add_option("--kappa", o.kappa, "Approximate mode: derivative bound");
    sub->add_option("--seed", o.seed, "Seed recorded in the config");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--grid-res", o.grid_res, "Grid points per axis");
    sub->add_option("--margin", o.margin, "Grid strictness margin (default 2/(res-1))");
  };
  auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", o.json, "Structured output"); };

  CLI::App* check = app.add_subcommand("check", "Decide core membership");
  add_economy(check);
  add_point(check);
  add_solver(check);
  add_json(check);
  CLI::App* pareto = app.add_subcommand("pareto", "Pareto preprocessing only");
  add_economy(pareto);
  add_point(pareto);
  add_solver(pareto);
  add_json(pareto);
  CLI::App* lindahl = app.add_subcommand("lindahl", "Local Lindahl test");
  add_economy(lindahl);
  add_point(lindahl);
  lindahl->add_option("--tol", o.tol, "Threshold on the derivative norm");
  add_json(lindahl);
  CLI::App* brute = app.add_subcommand("bruteforce", "Grid oracle over all coalitions");
  add_economy(brute);
  add_point(brute);
  add_grid(brute);
  add_json(brute);
  CLI::App* cmp = app.add_subcommand("compare", "Algorithm against the grid oracle");
  add_economy(cmp);
  add_point(cmp);
  add_solver(cmp);
  add_grid(cmp);
  add_json(cmp);
  CLI::App* validate = app.add_subcommand("validate", "Sample the economy's assumptions");
  add_economy(validate);
  validate->add_option("--samples", o.samples, "Sample pairs");
  validate->add_option("--seed", o.seed, "Sampling seed");
  add_json(validate);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (check->parsed()) return cmd_check(o, out);
    if (pareto->parsed()) return cmd_pareto(o, out);
    if (lindahl->parsed()) return cmd_lindahl(o, out);
    if (brute->parsed()) return cmd_bruteforce(o, out);
    if (cmp->parsed()) return cmd_compare(o, out);
    if (validate->parsed()) return cmd_validate(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace pgcore
