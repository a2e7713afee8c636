#include <cmath>
#include <random>

#include "affgeo/errors.hpp"
#include "affgeo/expr.hpp"
#include "affgeo/jet.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace affgeo;

namespace {

Jet eval_text(const std::string& text, const std::vector<std::string>& coords,
              std::vector<double> p, int order) {
  return eval_jet(parse(text, coords), p, order);
}

}  // namespace

TEST_CASE("polynomial jet carries exact derivatives") {
  const Jet j = eval_text("x^2", {"x"}, {3.0}, 2);
  CHECK(j.value() == 9.0);
  CHECK(j.partial({0}) == 6.0);
  CHECK(j.partial({0, 0}) == 2.0);
}

TEST_CASE("sin at zero") {
  const Jet j = eval_text("sin(x)", {"x"}, {0.0}, 1);
  CHECK(j.value() == 0.0);
  CHECK(j.partial({0}) == 1.0);
}

TEST_CASE("exp(x*y) matches central differences") {
  const std::vector<std::string> coords{"x", "y"};
  const Expression e = parse("exp(x*y)", coords);
  const Jet j = eval_jet(e, std::vector<double>{1.0, 1.0}, 1);
  const double euler = std::exp(1.0);
  CHECK(j.value() == doctest::Approx(euler).epsilon(1e-15));
  auto f = [&](const std::vector<double>& p) { return evaluate(e, p); };
  for (int i = 0; i < 2; ++i) {
    const double fd = oracle::central_diff(f, {1.0, 1.0}, i, 1e-5);
    CHECK(std::abs(j.partial({i}) - fd) <= 1e-9 * euler);
    CHECK(j.partial({i}) == doctest::Approx(euler).epsilon(1e-15));
  }
}

TEST_CASE("mixed partials are symmetric and match hand values") {
  // f = x^2 y^3: f_xy = 6 x y^2, f_xyy = 12 x y
  const Jet j = eval_text("x^2*y^3", {"x", "y"}, {2.0, 3.0}, 3);
  CHECK(j.partial({0, 1}) == doctest::Approx(6 * 2 * 9));
  CHECK(j.partial({1, 0}) == j.partial({0, 1}));
  CHECK(j.partial({1, 0, 1}) == doctest::Approx(12 * 2 * 3));
  CHECK(j.partial({1, 1, 0}) == j.partial({0, 1, 1}));
}

TEST_CASE("derivative lowers order and agrees with partials") {
  const Jet j = eval_text("sin(x)*exp(y) + x^3*y", {"x", "y"}, {0.4, -0.3}, 4);
  const Jet dx = j.derivative(0);
  CHECK(dx.order() == 3);
  CHECK(dx.value() == doctest::Approx(j.partial({0})).epsilon(1e-14));
  CHECK(dx.partial({1, 1}) == doctest::Approx(j.partial({0, 1, 1})).epsilon(1e-14));
  CHECK(dx.partial({0, 0, 1}) == doctest::Approx(j.partial({0, 0, 0, 1})).epsilon(1e-14));
}

TEST_CASE("lower-order evaluation is the exact prefix of a higher-order one") {
  oracle::ExprGen gen({"x", "y", "z"}, 11);
  for (int trial = 0; trial < 200; ++trial) {
    const Expression e = parse(gen.make(4), std::vector<std::string>{"x", "y", "z"});
    const auto p = gen.point(-1.0, 1.0);
    const Jet high = eval_jet(e, p, 3);
    for (int k = 0; k < 3; ++k) {
      const Jet low = eval_jet(e, p, k);
      const Jet cut = high.truncated(k);
      REQUIRE(low.coefficients().size() == cut.coefficients().size());
      for (std::size_t i = 0; i < low.coefficients().size(); ++i)
        CHECK(low.coefficients()[i] == cut.coefficients()[i]);
    }
  }
}

TEST_CASE("order-1 partials of random expressions match finite differences") {
  const std::vector<std::string> coords{"u", "v", "w"};
  oracle::ExprGen gen(coords, 2024);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Expression e = parse(gen.make(4), coords);
    const auto p = gen.point(-1.5, 1.5);
    const Jet j = eval_jet(e, p, 1);
    auto f = [&](const std::vector<double>& q) { return evaluate(e, q); };
    for (int i = 0; i < 3; ++i) {
      const double h = oracle::default_step(p[i]);
      const double fd = oracle::central_diff(f, p, i, h);
      const double d = j.partial({i});
      CHECK(std::abs(d - fd) <= 1e-6 * std::max(1.0, std::abs(d)));
      ++checked;
    }
  }
  CHECK(checked == 3000);
}

TEST_CASE("jet sum and product are commutative and associative to rounding") {
  oracle::ExprGen gen({"x", "y"}, 5);
  const std::vector<std::string> coords{"x", "y"};
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = gen.point(-1.0, 1.0);
    const Jet a = eval_jet(parse("sin(x) + 0.5*y", coords), p, 3);
    const Jet b = eval_jet(parse(gen.make(3), coords), p, 3);
    const Jet c = eval_jet(parse(gen.make(3), coords), p, 3);
    CHECK(max_abs_difference(a + b, b + a) <= 1e-12);
    CHECK(max_abs_difference(a * b, b * a) <= 1e-12);
    CHECK(max_abs_difference((a + b) + c, a + (b + c)) <= 1e-12);
    const double scale = std::max({1.0, std::abs(a.value()), std::abs(b.value()), std::abs(c.value())});
    CHECK(max_abs_difference((a * b) * c, a * (b * c)) <= 1e-12 * scale * scale * scale);
  }
}

TEST_CASE("mixed-order arithmetic truncates to the lower order") {
  const Jet a = Jet::variable(2, 3, 0, 1.0);
  const Jet b = Jet::variable(2, 1, 1, 2.0);
  CHECK((a * b).order() == 1);
  CHECK((a + b).order() == 1);
  CHECK((b - a).order() == 1);
  CHECK_THROWS_AS(a + Jet::constant(3, 1, 0.0), Error);
}

TEST_CASE("domain errors") {
  const std::vector<std::string> coords{"x"};
  auto kind_of = [&](const char* text, double x) {
    try {
      eval_jet(parse(text, coords), std::vector<double>{x}, 2);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Internal;
  };
  CHECK(kind_of("log(x)", -1.0) == ErrorKind::Domain);
  CHECK(kind_of("log(x)", 0.0) == ErrorKind::Domain);
  CHECK(kind_of("sqrt(x)", 0.0) == ErrorKind::Domain);
  CHECK(kind_of("1/x", 0.0) == ErrorKind::Domain);
  CHECK(kind_of("x^0.5", -2.0) == ErrorKind::Domain);
  CHECK(kind_of("x^x", -2.0) == ErrorKind::Domain);
  // integer powers accept negative bases
  CHECK(evaluate(parse("x^3", coords), std::vector<double>{-2.0}) == -8.0);
  CHECK(evaluate(parse("x^(1+1)", coords), std::vector<double>{-2.0}) == 4.0);
  CHECK(evaluate(parse("x^-2", coords), std::vector<double>{-2.0}) == 0.25);
  CHECK_THROWS_AS(eval_jet(parse("x", coords), std::vector<double>{1.0}, 5), Error);
}

TEST_CASE("real power and elementary derivatives") {
  const Jet j = eval_text("x^2.5 + cosh(x) + tan(x)", {"x"}, {0.7}, 2);
  const double x = 0.7;
  const double sec2 = 1.0 / (std::cos(x) * std::cos(x));
  CHECK(j.partial({0}) == doctest::Approx(2.5 * std::pow(x, 1.5) + std::sinh(x) + sec2).epsilon(1e-13));
  CHECK(j.partial({0, 0}) ==
        doctest::Approx(3.75 * std::pow(x, 0.5) + std::cosh(x) + 2 * sec2 * std::tan(x)).epsilon(1e-13));
}
