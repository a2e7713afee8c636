#pragma once

// Affine inner products on R^n in canonical form (u, v) = lambda + B(u - z, v - z),
// and the hat space of affine functionals with its induced inner product.

#include <Eigen/Dense>
#include <functional>

namespace affgeo {

struct AffineInnerProduct {
  Eigen::MatrixXd bilinear;  // B, symmetric and nondegenerate
  Eigen::VectorXd center;    // z
  double lambda = 0.0;

  // Validates symmetry and nondegeneracy of B; throws SingularBilinearPart.
  static AffineInnerProduct make(Eigen::MatrixXd bilinear, Eigen::VectorXd center, double lambda);

  int dim() const { return static_cast<int>(center.size()); }
};

// An element  xbar + mu * zhat  of the hat space.
struct HatVector {
  Eigen::VectorXd xbar;
  double mu = 0.0;
};

// Canonical (lambda, z) from S(0,0), the functional v -> (0, v> and B.
AffineInnerProduct decompose(double s00, const Eigen::VectorXd& s0, const Eigen::MatrixXd& bilinear);

double evaluate(const AffineInnerProduct& p, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// xhat = (x - z)bar + zhat.
HatVector hat_embed(const AffineInnerProduct& p, const Eigen::VectorXd& x);

// <xbar + mu1 zhat, ybar + mu2 zhat> = B(x, y) + lambda mu1 mu2; throws
// DegenerateLambda when lambda vanishes.
double hat_inner(const AffineInnerProduct& p, const HatVector& a, const HatVector& b);

using TwoAffineMap = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

// S(a+u, b+v) = S(a,b) + T1(u,b) + T1(v,a) + T(u,v) with T1(u,b) = u . (T b + linear).
struct TwoAffineParts {
  double s00 = 0.0;
  Eigen::VectorXd linear;     // v -> T1(v, 0) = S(v, 0) - S(0, 0)
  Eigen::MatrixXd bilinear;   // T

  double t1(const Eigen::VectorXd& u, const Eigen::VectorXd& b) const {
    return u.dot(bilinear * b + linear);
  }
};

// Recovers the parts of a black-box symmetric 2-affine map over the standard
// basis of R^n; checks symmetry and base-point independence on seeded samples
// and throws NotTwoAffine when either fails beyond 1e-9.
TwoAffineParts recover_parts(const TwoAffineMap& s, int n);

// Canonical form of a symmetric 2-affine map with nondegenerate bilinear part.
AffineInnerProduct to_affine_inner_product(const TwoAffineParts& parts);

}  // namespace affgeo
