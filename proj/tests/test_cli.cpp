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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "pgcore/cli.hpp"
#include "pgcore/economy_io.hpp"
#include "pgcore/error.hpp"
#include "pgcore/families.hpp"
#include "pgcore/verdict_io.hpp"

using namespace pgcore;

namespace {

const std::string kQuad2 = std::string(PGCORE_DATA_DIR) + "/quad2.econ";

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("point parsing") {
  CHECK(parse_point("1.0,1.0") == Vector{1.0, 1.0});
  CHECK(parse_point(" 5e-1 , +0.25") == Vector{0.5, 0.25});
  CHECK_THROWS_AS(parse_point(""), Error);
  CHECK_THROWS_AS(parse_point("0.5,"), Error);
  CHECK_THROWS_AS(parse_point("0.5;0.5"), Error);
  CHECK_THROWS_AS(parse_point("abc"), Error);
}

TEST_CASE("check verb") {
  const Run r = cli({"check", "--economy", kQuad2, "--point", "1.0,1.0"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("status: IN_CORE") != std::string::npos);

  const Run j = cli({"check", "--economy", kQuad2, "--point", "1.0,1.0", "--json"});
  REQUIRE(j.code == kExitOk);
  const CoreVerdict v = parse_verdict(j.out);
  CHECK(v.status == CoreStatus::kInCore);
  CHECK(v.programs_solved <= 6);
  const UtilityOracle o = make_oracle(load_economy(kQuad2));
  CHECK(v == test_core_membership(o, Outcome({1.0, 1.0}), SolverConfig{}));
  CHECK(cli({"check", "--economy", kQuad2, "--point", "1.0,1.0", "--json"}).out == j.out);
}

TEST_CASE("approximate mode flags") {
  const Run r = cli({"check", "--economy", kQuad2, "--point", "1,1", "--mode", "approx",
                     "--eps-core", "0.01", "--kappa", "1.5", "--json"});
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["status"] == "IN_CORE");
  CHECK(doc["config"]["mode"] == "approx");
  CHECK(doc["config"]["kappa"] == 1.5);

  // kappa defaults to the sampled estimate.
  const Run est = cli({"check", "--economy", kQuad2, "--point", "1,1", "--mode", "approx",
                       "--eps-core", "0.01", "--json"});
  REQUIRE(est.code == kExitOk);
  CHECK(nlohmann::json::parse(est.out)["config"]["kappa"].get<double>() > 0.0);

  CHECK(cli({"check", "--economy", kQuad2, "--point", "1,1", "--mode", "approx"}).code ==
        kExitInputError);
}

TEST_CASE("other verbs") {
  const Run p = cli({"pareto", "--economy", kQuad2, "--point", "0.5,0.5"});
  CHECK(p.code == kExitOk);
  CHECK(p.out.find("IMPROVING") != std::string::npos);

  const Run l = cli({"lindahl", "--economy", kQuad2, "--point", "1,1", "--json"});
  CHECK(l.code == kExitOk);
  CHECK(nlohmann::json::parse(l.out)["is_lindahl"] == true);

  const Run b = cli({"bruteforce", "--economy", kQuad2, "--point", "0.2,0.2", "--json"});
  CHECK(b.code == kExitOk);
  CHECK(nlohmann::json::parse(b.out)["in_core"] == false);

  const Run v = cli({"validate", "--economy", kQuad2, "--samples", "200", "--seed", "3"});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find("valid: true") != std::string::npos);
}

TEST_CASE("compare verb") {
  const Run r = cli({"compare", "--economy", kQuad2, "--point", "0.5,0.5", "--grid-res", "21"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("algorithm: NOT_PARETO") != std::string::npos);
  CHECK(r.out.find("oracle: DEVIATION") != std::string::npos);
  CHECK(r.out.find("agreement: true") != std::string::npos);

  const Run j = cli({"compare", "--economy", kQuad2, "--point", "0.5,0.5", "--json"});
  REQUIRE(j.code == kExitOk);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["agree"] == true);
  CHECK(doc["theorem1"]["outcome"] == "HOLDS");
  CHECK(doc["oracle"]["grid"]["margin"] == doctest::Approx(0.1));

  // A two-point grid cannot see the pair's deviation.
  EconomySpec spec;
  spec.n = 3;
  spec.family = Family::kLogAgg;
  spec.alpha = {3, 3, 3};
  spec.weights = {{0.3, 2, 0.1}, {2, 0.3, 0.1}, {2, 2, 0.3}};
  spec.beta = {5, 5, 0.1};
  const std::string path = write_temp("pgcore_overwork3.econ", economy_to_json(spec));
  const Run m = cli({"compare", "--economy", path, "--point", "0.45,0.45,1", "--grid-res", "2",
                     "--margin", "0"});
  CHECK(m.code == kExitMismatch);
  CHECK(m.out.find("agreement: false") != std::string::npos);
}

TEST_CASE("input errors exit with 2") {
  const Run dim = cli({"check", "--economy", kQuad2, "--point", "1.0,1.0,1.0"});
  CHECK(dim.code == kExitInputError);
  CHECK(dim.err.find("DimensionMismatch") != std::string::npos);

  CHECK(cli({"check", "--economy", "/nonexistent.econ", "--point", "1,1"}).code ==
        kExitInputError);
  CHECK(cli({"check", "--economy", kQuad2, "--point", "1,x"}).code == kExitInputError);
  CHECK(cli({"check", "--economy", kQuad2, "--point", "1.5,1"}).code == kExitInputError);
  CHECK(cli({"check", "--economy", kQuad2}).code == kExitInputError);
  CHECK(cli({"check", "--economy", kQuad2, "--point", "1,1", "--bogus"}).code ==
        kExitInputError);
  CHECK(cli({"frobnicate"}).code == kExitInputError);
  CHECK(cli({}).code == kExitInputError);
  CHECK(cli({"check", "--economy", kQuad2, "--point", "1,1", "--tau-dev", "1e-7"}).code ==
        kExitInputError);

  const std::string bad = write_temp("pgcore_bad.econ",
                                     R"({"n": 1, "family": "affine", "params": {"W": [[1]]},
                                         "colour": "red"})");
  const Run unknown = cli({"validate", "--economy", bad});
  CHECK(unknown.code == kExitInputError);
  CHECK(unknown.err.find("ConfigParseError") != std::string::npos);

  const std::string big = write_temp("pgcore_big.econ", economy_to_json(random_economy(Family::kAffine, 6, 1)));
  const Run large = cli({"bruteforce", "--economy", big, "--point", "0,0,0,0,0,0"});
  CHECK(large.code == kExitInputError);
  CHECK(large.err.find("InstanceTooLarge") != std::string::npos);

  CHECK(cli({"--help"}).code == kExitOk);
}
