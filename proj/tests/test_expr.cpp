#include <cmath>

#include "affgeo/errors.hpp"
#include "affgeo/expr.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace affgeo;

namespace {

std::size_t parse_error_offset(const std::string& text, const std::vector<std::string>& coords) {
  try {
    parse(text, coords);
  } catch (const ParseError& e) {
    return e.offset();
  }
  return std::string::npos;
}

}  // namespace

TEST_CASE("grammar examples") {
  CHECK(parse("x^2 + 3", std::vector<std::string>{"x"}).structure() == "Add(Pow(Var x, Const 2), Const 3)");
  CHECK(parse("sin(t)*exp(2*u)", std::vector<std::string>{"t", "u"}).structure() ==
        "Mul(Call sin(Var t), Call exp(Mul(Const 2, Var u)))");
  CHECK(parse_error_offset("1 -", {"x"}) == 3);
}

TEST_CASE("precedence and associativity") {
  const std::vector<std::string> x{"x"};
  CHECK(parse("-x^2", x).structure() == "Pow(Neg(Var x), Const 2)");
  CHECK(parse("2^3^2", x).structure() == "Pow(Const 2, Pow(Const 3, Const 2))");
  CHECK(evaluate(parse("2^3^2", x), std::vector<double>{0.0}) == 512.0);
  CHECK(evaluate(parse("8/2/2", x), std::vector<double>{0.0}) == 2.0);
  CHECK(evaluate(parse("1-2-3", x), std::vector<double>{0.0}) == -4.0);
  CHECK(evaluate(parse("1+2*3^2", x), std::vector<double>{0.0}) == 19.0);
  CHECK(evaluate(parse("-x^2", x), std::vector<double>{3.0}) == 9.0);
  CHECK(evaluate(parse("-(x^2)", x), std::vector<double>{3.0}) == -9.0);
  CHECK(evaluate(parse("2*-x", x), std::vector<double>{3.0}) == -6.0);
  CHECK(evaluate(parse("1.5e1 + .5 + 2E-1", x), std::vector<double>{0.0}) == doctest::Approx(15.7));
}

TEST_CASE("parse errors report offsets") {
  CHECK(parse_error_offset("(x", {"x"}) == 2);
  CHECK(parse_error_offset("x y", {"x", "y"}) == 2);
  CHECK(parse_error_offset("sin x", {"x"}) == 4);
  CHECK(parse_error_offset("x + * 2", {"x"}) == 4);
  CHECK(parse_error_offset("", {"x"}) == 0);
  CHECK(parse_error_offset("x $", {"x"}) == 2);
}

TEST_CASE("unknown identifiers") {
  try {
    parse("x + rho", std::vector<std::string>{"x"});
    FAIL("expected UnknownIdentifier");
  } catch (const UnknownIdentifier& e) {
    CHECK(e.name() == "rho");
    CHECK(e.offset() == 4);
    CHECK(e.kind() == ErrorKind::UnknownIdentifier);
  }
  CHECK_THROWS_AS(parse("atan(x)", std::vector<std::string>{"x"}), UnknownIdentifier);
}

TEST_CASE("coordinate list preconditions") {
  CHECK_THROWS_AS(parse("x", std::vector<std::string>{}), Error);
  CHECK_THROWS_AS(parse("x", std::vector<std::string>{"x", "x"}), Error);
}

TEST_CASE("coordinates may shadow function names") {
  const std::vector<std::string> coords{"exp", "y"};
  CHECK(evaluate(parse("exp * y", coords), std::vector<double>{2.0, 3.0}) == 6.0);
}

TEST_CASE("serialization round trip is structural") {
  const std::vector<std::string> coords{"t", "r", "phi"};
  oracle::ExprGen gen(coords, 99);
  for (int trial = 0; trial < 500; ++trial) {
    const Expression e = parse(gen.make(5), coords);
    const Expression again = parse(e.to_string(), coords);
    CHECK(again.structurally_equal(e));
    CHECK(again.to_string() == e.to_string());
  }
  for (const char* text : {"-x^2", "-(x^2)", "(x^2)^3", "x^2^3", "x - (y - 1)", "x / (y * x)", "x^-y",
                           "--x", "1e+20*x", "1.25e-7 - y"}) {
    const Expression e = parse(text, std::vector<std::string>{"x", "y"});
    CHECK(parse(e.to_string(), std::vector<std::string>{"x", "y"}).structurally_equal(e));
  }
}
