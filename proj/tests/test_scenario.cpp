#include <cmath>
#include <string>

#include "affgeo/checks.hpp"
#include "affgeo/errors.hpp"
#include "affgeo/runner.hpp"
#include "affgeo/scenario.hpp"
#include "doctest.h"

using namespace affgeo;

namespace {

const char* kSphere = R"toml(
[scenario]
id = "s2"
description = "unit sphere"

[chart]
coords = ["phi", "psi"]
signature = [1, 1]
region = [[0.3, 2.8], [0, 6]]

[metric]
diagonal = ["1", "sin(phi)^2"]

[sampling]
points = 10
seed = 11

[checks]
names = ["scalar_curvature", "first_bianchi"]

[checks.target]
scalar_curvature = 2
)toml";

ErrorKind kind_of(const std::string& text) {
  try {
    scenario_from_toml(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

const nlohmann::ordered_json& record(const RunResult& r, const std::string& name) {
  for (const auto& c : r.report["checks"])
    if (c["name"] == name) return c;
  FAIL("no record " << name);
  static nlohmann::ordered_json none;
  return none;
}

}  // namespace

TEST_CASE("scenario: loads chart, metric, checks and targets") {
  const Scenario sc = scenario_from_toml(kSphere);
  CHECK(sc.id == "s2");
  CHECK(sc.spec.dim() == 2);
  CHECK(sc.points == 10);
  CHECK(sc.seed == 11);
  REQUIRE(sc.checks.size() == 2);
  CHECK(sc.checks[0].name == "scalar_curvature");
  CHECK(sc.checks[0].target_text == "2");
}

TEST_CASE("scenario: schema, parse and validation errors") {
  CHECK(kind_of(replace(kSphere, "seed = 11", "seed = 11\nextra = 1")) == ErrorKind::Schema);
  CHECK(kind_of(replace(kSphere, "seed = 11\n", "")) == ErrorKind::Schema);
  CHECK(kind_of(replace(kSphere, "[\"1\", \"sin(phi)^2\"]", "[\"1\"]")) == ErrorKind::Schema);
  CHECK(kind_of(replace(kSphere, "sin(phi)^2", "sin(chi)^2")) == ErrorKind::Parse);
  CHECK(kind_of(replace(kSphere, "sin(phi)^2", "sin(phi)^")) == ErrorKind::Parse);
  CHECK(kind_of(replace(kSphere, "\"first_bianchi\"", "\"nope\"")) == ErrorKind::Schema);
  CHECK(kind_of(replace(kSphere, "[0.3, 2.8]", "[2.8, 0.3]")) == ErrorKind::Validation);
  // log of a negative number everywhere on the region
  CHECK(kind_of(replace(kSphere, "\"1\", \"sin", "\"log(-1 - phi^2)\", \"sin")) == ErrorKind::Validation);
  CHECK(kind_of("a = [") == ErrorKind::Parse);
}

TEST_CASE("scenario: schema errors carry the offending path") {
  try {
    scenario_from_toml(replace(kSphere, "[checks.target]", "[checks.target]\nbogus = 1"));
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(e.path().find("checks.target") != std::string::npos);
  }
}

TEST_CASE("scenario: generator and default check set") {
  const Scenario sc = scenario_from_toml(R"toml(
[generator]
kind = "random_smooth"
seed = 7
[sampling]
seed = 3
points = 4
)toml");
  CHECK(sc.generator == "random_smooth");
  CHECK(sc.spec.dim() == 4);
  REQUIRE(sc.checks.size() == default_checks().size());
  for (std::size_t i = 0; i < sc.checks.size(); ++i) CHECK(sc.checks[i].name == default_checks()[i]);
  const Scenario again = scenario_from_toml("[generator]\nkind = \"random_smooth\"\nseed = 7\n[sampling]\nseed = 3\n");
  const std::vector<double> p{0.1, -0.2, 0.3, 0.05};
  CHECK(evaluate(sc.spec.theta, p) == evaluate(again.spec.theta, p));
  CHECK(sc.spec.theta.to_string() == again.spec.theta.to_string());
}

TEST_CASE("runner: sample points are reproducible and avoid exclusions") {
  const Scenario sc = scenario_from_toml(kSphere);
  const auto a = sample_points(sc.spec, 50, 5);
  const auto b = sample_points(sc.spec, 50, 5);
  CHECK(a == b);
  CHECK(a != sample_points(sc.spec, 50, 6));
  for (const auto& p : a) {
    CHECK(p[0] > 0.3);
    CHECK(p[0] < 2.8);
  }
}

TEST_CASE("runner: passing run, failing target, exit codes") {
  Scenario sc = scenario_from_toml(kSphere);
  RunResult ok = run(sc, {});
  CHECK(ok.exit_code == kExitPass);
  CHECK(ok.report["status"] == "pass");
  CHECK(record(ok, "scalar_curvature")["pass"] == true);
  CHECK(record(ok, "scalar_curvature")["points_evaluated"] == 10);

  sc = scenario_from_toml(replace(kSphere, "scalar_curvature = 2", "scalar_curvature = 3"));
  RunResult bad = run(sc, {});
  CHECK(bad.exit_code == kExitCheckFailure);
  CHECK(bad.report["status"] == "fail");
  CHECK(record(bad, "scalar_curvature")["max_abs_residual"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("runner: results do not depend on the thread count") {
  const Scenario sc = scenario_from_toml("[generator]\nkind = \"random_smooth\"\nseed = 2\n[sampling]\nseed = 9\npoints = 6\n");
  RunOptions one;
  one.threads = 1;
  RunOptions many;
  many.threads = 4;
  auto a = run(sc, one).report;
  auto b = run(sc, many).report;
  a.erase("wall_time_s");
  b.erase("wall_time_s");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("runner: nonzero expectation with a reference") {
  Scenario sc = scenario_from_toml(R"toml(
[chart]
coords = ["t", "r", "phi", "psi"]
signature = [-1, 1, 1, 1]
region = [[-1, 1], [3, 10], [0.3, 2.8], [-1, 1]]
[metric]
diagonal = ["-(1 - 2/r + 0.25/r^2)", "1/(1 - 2/r + 0.25/r^2)", "r^2", "r^2*sin(phi)^2"]
[potential]
a_flat = ["1/r", "0", "0", "0"]
[sampling]
points = 8
seed = 1
[checks]
names = ["M3"]
[checks.expect]
M3 = "nonzero"
[checks.reference]
M3 = "0.25/r^4"
)toml");
  RunResult r = run(sc, {});
  CHECK(r.exit_code == kExitPass);
  CHECK(record(r, "M3")["as_expected"] == true);
  CHECK(record(r, "M3")["reference"]["match"] == true);

  sc.checks[0].reference = parse("0.3/r^4", sc.spec.chart.coords);
  r = run(sc, {});
  CHECK(r.exit_code == kExitCheckFailure);
  CHECK(record(r, "M3")["reference"]["match"] == false);
}

TEST_CASE("runner: error_result maps kinds to exit codes") {
  CHECK(error_result("verify", SchemaError("x", "y")).exit_code == kExitSchema);
  CHECK(error_result("verify", ParseError(3, "bad")).exit_code == kExitSchema);
  CHECK(error_result("verify", Error(ErrorKind::Validation, "v")).exit_code == kExitSchema);
  CHECK(error_result("verify", Error(ErrorKind::SingularMetric, "s")).exit_code == kExitRuntime);
  CHECK(error_result("verify", std::runtime_error("r")).exit_code == kExitRuntime);
  const auto r = error_result("verify", SchemaError("checks.names", "bad"));
  CHECK(r.report["error"]["path"] == "checks.names");
}
