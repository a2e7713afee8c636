#include <cmath>
#include <random>

#include "affgeo/affine_linear.hpp"
#include "affgeo/errors.hpp"
#include "doctest.h"

using namespace affgeo;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

MatrixXd random_symmetric(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  MatrixXd s = a + a.transpose();
  s += static_cast<double>(n) * MatrixXd::Identity(n, n);  // keep it well conditioned
  if (u(rng) < 0) s(0, 0) = -s(0, 0) - 2.0 * n;            // sometimes indefinite
  return s;
}

VectorXd random_vector(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace

TEST_CASE("decompose examples") {
  auto p = decompose(5.0, Vector2d(-1.0, 0.0), MatrixXd::Identity(2, 2));
  CHECK(p.center.isApprox(Vector2d(1.0, 0.0)));
  CHECK(p.lambda == doctest::Approx(4.0));

  p = decompose(0.0, Vector2d::Zero(), MatrixXd::Identity(2, 2));
  CHECK(p.center.norm() == 0.0);
  CHECK(p.lambda == 0.0);

  MatrixXd lor = Vector2d(1.0, -1.0).asDiagonal();
  p = decompose(7.0, Vector2d::Zero(), lor);
  CHECK(p.center.norm() == 0.0);
  CHECK(p.lambda == 7.0);

  MatrixXd singular{{1.0, 2.0}, {2.0, 4.0}};
  CHECK(kind_of([&] { decompose(1.0, Vector2d::Zero(), singular); }) == ErrorKind::SingularBilinearPart);
  MatrixXd asym{{1.0, 2.0}, {0.0, 1.0}};
  CHECK(kind_of([&] { decompose(1.0, Vector2d::Zero(), asym); }) == ErrorKind::SingularBilinearPart);
}

TEST_CASE("evaluate examples") {
  const auto p = AffineInnerProduct::make(MatrixXd::Identity(2, 2), Vector2d(1.0, 0.0), 4.0);
  CHECK(evaluate(p, p.center, p.center) == 4.0);
  CHECK(evaluate(p, Vector2d(2.0, 0.0), Vector2d(0.0, 0.0)) == doctest::Approx(3.0));
  CHECK(evaluate(p, Vector2d(0.0, 0.0), Vector2d(2.0, 0.0)) == doctest::Approx(3.0));

  const auto q = AffineInnerProduct::make(MatrixXd{{2.0, 1.0}, {1.0, -1.0}}, Vector2d::Zero(), 0.0);
  const Vector2d u(0.3, -1.2), v(2.0, 0.5);
  CHECK(evaluate(q, u, v) == doctest::Approx(u.dot(q.bilinear * v)));
  CHECK(kind_of([&] { evaluate(q, VectorXd::Zero(3), v); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("hat inner product examples") {
  const auto p = AffineInnerProduct::make(MatrixXd::Identity(2, 2), Vector2d(1.0, 0.0), 4.0);
  const HatVector zhat{Vector2d::Zero(), 1.0};
  CHECK(hat_inner(p, zhat, zhat) == 4.0);
  const auto xh = hat_embed(p, Vector2d(2.0, 0.0));
  const auto yh = hat_embed(p, Vector2d(0.0, 0.0));
  CHECK(xh.mu == 1.0);
  CHECK(xh.xbar.isApprox(Vector2d(1.0, 0.0)));
  CHECK(hat_inner(p, xh, yh) == doctest::Approx(3.0));

  const auto flat = AffineInnerProduct::make(MatrixXd::Identity(2, 2), Vector2d(1.0, 0.0), 0.0);
  CHECK(kind_of([&] { hat_inner(flat, zhat, zhat); }) == ErrorKind::DegenerateLambda);
}

TEST_CASE("recover_parts examples") {
  auto dot = [](const VectorXd& u, const VectorXd& v) { return u.dot(v); };
  auto parts = recover_parts(dot, 3);
  CHECK(parts.s00 == 0.0);
  CHECK(parts.bilinear.isApprox(MatrixXd::Identity(3, 3)));
  CHECK(parts.linear.norm() == 0.0);

  const Vector2d z(1.0, 0.0);
  auto shifted = [&](const VectorXd& u, const VectorXd& v) { return 4.0 + (u - z).dot(v - z); };
  parts = recover_parts(shifted, 2);
  CHECK((parts.bilinear - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  const Vector2d u(0.7, -0.4), b(1.5, 2.5);
  CHECK(parts.t1(u, b) == doctest::Approx(u.dot(b - z)));
  const auto p = to_affine_inner_product(parts);
  CHECK((p.center - z).norm() < 1e-12);
  CHECK(p.lambda == doctest::Approx(4.0));

  auto lopsided = [](const VectorXd& u, const VectorXd&) { return u[0]; };
  CHECK(kind_of([&] { recover_parts(lopsided, 2); }) == ErrorKind::NotTwoAffine);
  auto quartic = [](const VectorXd& u, const VectorXd& v) { return u.dot(v) * u.dot(v); };
  CHECK(kind_of([&] { recover_parts(quartic, 2); }) == ErrorKind::NotTwoAffine);
}

TEST_CASE("decompose round trip on random data") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 5;
    const MatrixXd b = random_symmetric(rng, n);
    const VectorXd s0 = random_vector(rng, n);
    const double s00 = random_vector(rng, 1)[0];
    const auto p = decompose(s00, s0, b);
    const VectorXd zero = VectorXd::Zero(n);
    CHECK(std::abs(evaluate(p, zero, zero) - s00) <= 1e-12 * std::max(1.0, std::abs(s00)) * 10);
    // (0, v> = S(0, v) - S(0, 0)
    for (int i = 0; i < n; ++i) {
      const VectorXd ei = VectorXd::Unit(n, i);
      const double lin = evaluate(p, zero, ei) - evaluate(p, zero, zero);
      CHECK(std::abs(lin - s0[i]) <= 1e-10 * std::max(1.0, s0.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("hat embedding is isometric on random data") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> lam(0.5, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 6;
    const double sign = (trial % 3 == 0) ? -1.0 : 1.0;
    const auto p = AffineInnerProduct::make(random_symmetric(rng, n), random_vector(rng, n), sign * lam(rng));
    const VectorXd x = random_vector(rng, n), y = random_vector(rng, n);
    const double lhs = hat_inner(p, hat_embed(p, x), hat_embed(p, y));
    const double rhs = evaluate(p, x, y);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));

    // hat_embed(x) - hat_embed(0) is additive in x
    const auto h0 = hat_embed(p, VectorXd::Zero(n));
    const auto hx = hat_embed(p, x), hy = hat_embed(p, y), hxy = hat_embed(p, x + y);
    const VectorXd lin = (hxy.xbar - h0.xbar) - (hx.xbar - h0.xbar) - (hy.xbar - h0.xbar);
    CHECK(lin.cwiseAbs().maxCoeff() <= 1e-12 * 10);
    CHECK(hxy.mu - h0.mu == 0.0);
  }
}
