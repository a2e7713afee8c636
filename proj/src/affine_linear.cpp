#include "affgeo/affine_linear.hpp"

#include <cmath>
#include <random>

#include "affgeo/errors.hpp"

namespace affgeo {

namespace {

constexpr double kDegeneracy = 1e-12;
constexpr double kAffineTolerance = 1e-9;

void require_dim(const Eigen::VectorXd& v, int n, const char* what) {
  if (v.size() != n) fail(ErrorKind::DimensionMismatch, std::string(what) + " has wrong dimension");
}

void require_nondegenerate(const Eigen::MatrixXd& b) {
  if (b.rows() != b.cols() || b.rows() == 0)
    fail(ErrorKind::DimensionMismatch, "bilinear part must be a nonempty square matrix");
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if ((b - b.transpose()).cwiseAbs().maxCoeff() > kDegeneracy * scale)
    fail(ErrorKind::SingularBilinearPart, "bilinear part is not symmetric");
  // |det B| relative to the largest entry raised to the dimension.
  const double det = b.fullPivLu().determinant();
  if (!(std::abs(det) > kDegeneracy * std::pow(scale, static_cast<double>(b.rows()))))
    fail(ErrorKind::SingularBilinearPart, "bilinear part is degenerate");
}

}  // namespace

AffineInnerProduct AffineInnerProduct::make(Eigen::MatrixXd bilinear, Eigen::VectorXd center, double lambda) {
  require_nondegenerate(bilinear);
  require_dim(center, static_cast<int>(bilinear.rows()), "center");
  return AffineInnerProduct{std::move(bilinear), std::move(center), lambda};
}

AffineInnerProduct decompose(double s00, const Eigen::VectorXd& s0, const Eigen::MatrixXd& bilinear) {
  require_nondegenerate(bilinear);
  require_dim(s0, static_cast<int>(bilinear.rows()), "linear functional");
  // <z, v> = -(0, v>  for all v
  Eigen::VectorXd z = bilinear.fullPivLu().solve(-s0);
  const double lambda = s00 - z.dot(bilinear * z);
  return AffineInnerProduct{bilinear, std::move(z), lambda};
}

double evaluate(const AffineInnerProduct& p, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  require_dim(u, p.dim(), "u");
  require_dim(v, p.dim(), "v");
  return p.lambda + (u - p.center).dot(p.bilinear * (v - p.center));
}

HatVector hat_embed(const AffineInnerProduct& p, const Eigen::VectorXd& x) {
  require_dim(x, p.dim(), "x");
  return HatVector{x - p.center, 1.0};
}

double hat_inner(const AffineInnerProduct& p, const HatVector& a, const HatVector& b) {
  if (std::abs(p.lambda) <= kDegeneracy)
    fail(ErrorKind::DegenerateLambda, "lambda = 0: the hat space carries no induced inner product");
  require_dim(a.xbar, p.dim(), "a");
  require_dim(b.xbar, p.dim(), "b");
  return a.xbar.dot(p.bilinear * b.xbar) + p.lambda * a.mu * b.mu;
}

TwoAffineParts recover_parts(const TwoAffineMap& s, int n) {
  if (n < 1) fail(ErrorKind::DimensionMismatch, "dimension must be positive");
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  TwoAffineParts parts;
  parts.s00 = s(zero, zero);
  parts.linear.resize(n);
  parts.bilinear.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd ei = Eigen::VectorXd::Unit(n, i);
    parts.linear[i] = s(ei, zero) - parts.s00;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd ei = Eigen::VectorXd::Unit(n, i);
      const Eigen::VectorXd ej = Eigen::VectorXd::Unit(n, j);
      parts.bilinear(i, j) = s(ei, ej) - s(zero, ej) - s(ei, zero) + parts.s00;
    }
  }

  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto sample = [&] {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = u(rng);
    return v;
  };
  for (int trial = 0; trial < 8; ++trial) {
    const Eigen::VectorXd a = sample(), b = sample(), x = sample(), y = sample();
    const double sab = s(a, b);
    const double scale = std::max({1.0, std::abs(sab), std::abs(s(x, y))});
    if (std::abs(sab - s(b, a)) > kAffineTolerance * scale)
      fail(ErrorKind::NotTwoAffine, "map is not symmetric");
    // T(x, y) computed at base point (a, b) must not depend on the base point
    const double t_ab = s(a + x, b + y) - s(a, b + y) - s(a + x, b) + sab;
    if (std::abs(t_ab - x.dot(parts.bilinear * y)) > kAffineTolerance * scale)
      fail(ErrorKind::NotTwoAffine, "bilinear part depends on the base point");
    // T1(x, b) = S(a + x, b) - S(a, b) must not depend on a
    if (std::abs(s(a + x, b) - sab - parts.t1(x, b)) > kAffineTolerance * scale)
      fail(ErrorKind::NotTwoAffine, "linear-affine part depends on the base point");
  }
  return parts;
}

AffineInnerProduct to_affine_inner_product(const TwoAffineParts& parts) {
  return decompose(parts.s00, parts.linear, parts.bilinear);
}

}  // namespace affgeo
