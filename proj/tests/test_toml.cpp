#include <cmath>

#include "affgeo/errors.hpp"
#include "affgeo/toml.hpp"
#include "doctest.h"

using affgeo::parse_toml;

TEST_CASE("toml: scalars, strings and comments") {
  const auto j = parse_toml(R"(
# comment
a = 1
b = -2.5e-3   # trailing
c = "esc\t\"q\" \u00e9"
d = 'C:\raw'
e = true
f = [1, 2.5, "x"]
g = +inf
h = nan
i = 1_000
)");
  CHECK(j["a"] == 1);
  CHECK(j["b"].get<double>() == doctest::Approx(-2.5e-3));
  CHECK(j["c"] == "esc\t\"q\" \xc3\xa9");
  CHECK(j["d"] == "C:\\raw");
  CHECK(j["e"] == true);
  CHECK(j["f"].size() == 3);
  CHECK(std::isinf(j["g"].get<double>()));
  CHECK(std::isnan(j["h"].get<double>()));
  CHECK(j["i"] == 1000);
}

TEST_CASE("toml: tables, dotted keys, arrays of tables, inline tables") {
  const auto j = parse_toml(R"(
[chart]
coords = ["x", "y"]
region = [
  [0, 1],   # first
  [2, 3],
]
[checks.tolerance]
ricci = 1e-9
"quoted key" = 2
[[item]]
k = 1
[[item]]
k = 2
[x]
y.z = { a = 1, b = [true] }
)");
  CHECK(j["chart"]["coords"][1] == "y");
  CHECK(j["chart"]["region"][1][0] == 2);
  CHECK(j["checks"]["tolerance"]["ricci"].get<double>() == 1e-9);
  CHECK(j["checks"]["tolerance"]["quoted key"] == 2);
  REQUIRE(j["item"].size() == 2);
  CHECK(j["item"][1]["k"] == 2);
  CHECK(j["x"]["y"]["z"]["b"][0] == true);
}

TEST_CASE("toml: key order is preserved") {
  const auto j = parse_toml("b = 1\na = 2\nc = 3\n");
  std::string order;
  for (auto it = j.begin(); it != j.end(); ++it) order += it.key();
  CHECK(order == "bac");
}

TEST_CASE("toml: syntax errors carry offsets") {
  const char* bad[] = {
      "a = ",
      "a = 1\na = 2",
      "[t]\n[t]",
      "a = \"open",
      "a = [1, 2",
      "= 3",
      "a = 1 b = 2",
      "[t\nx = 1",
      "a = 1979-05-27",
      "a = \"\"\"multi\"\"\"",
      "a.b = 1\na = 2",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_toml(text), affgeo::ParseError);
  }
  try {
    parse_toml("x = 1\ny = ?");
    FAIL("expected a parse error");
  } catch (const affgeo::ParseError& e) {
    CHECK(e.offset() == 10);
  }
}
