#pragma once

// Semi-Riemannian geometry at a point of a coordinate chart, computed over
// jets so every derived tensor can be differentiated again.
//
// Conventions:
//   Gamma(k, i, j)     = Γ^k_ij
//   riemann(l, k, i, j) = R^l_kij with R(∂i, ∂j)∂k = R^l_kij ∂l and
//                         R(X,Y)Z = ∇X∇Y Z - ∇Y∇X Z - ∇[X,Y] Z
//   ricci(k, j)        = R^i_kij  (the unit sphere has R = +2)
//   2-forms            ω(∂i, ∂j) = ω_ij, so (dx∧dy)(∂x, ∂y) = 1
// Traces and inner products contract with g^ij / g_ij against coordinate
// frames; no orthonormal frames are built.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "affgeo/expr.hpp"
#include "affgeo/tensor.hpp"

namespace affgeo {

struct Chart {
  std::vector<std::string> coords;
  std::vector<int> signature;                     // entries ±1
  std::vector<std::pair<double, double>> region;  // open sampling interval per coordinate

  int dim() const { return static_cast<int>(coords.size()); }
  // n >= 2, distinct names, signature and region sized n, lo < hi.
  void validate() const;
  int negative_directions() const;
};

class MetricField {
 public:
  MetricField() = default;
  // `components` is the full symmetric n x n array (row-major).
  MetricField(std::vector<Expression> components, int dim);
  static MetricField from_lower(const std::vector<std::vector<Expression>>& lower);

  int dim() const { return dim_; }
  const Expression& component(int i, int j) const { return comps_[i * dim_ + j]; }
  Tensor jets(std::span<const double> point, int order) const;

 private:
  int dim_ = 0;
  std::vector<Expression> comps_;
};

// Evaluates n expressions as a (co)vector of jets.
Tensor field_jets(const std::vector<Expression>& comps, Slot slot, std::span<const double> point, int order);

// Throws Validation when the eigenvalue signs of the symmetrized value matrix
// do not show `negatives` negative directions, SingularMetric when an
// eigenvalue vanishes.
void check_signature(const Tensor& metric, int negatives);

class LocalGeometry {
 public:
  // `metric` is a symmetric (0,2) tensor of jets of order K. Christoffel
  // symbols are available for K >= 1, curvature for K >= 2.
  explicit LocalGeometry(Tensor metric);

  int dim() const { return n_; }
  int order() const { return order_; }
  int jet_dim() const { return jet_dim_; }

  const Tensor& metric() const { return g_; }
  const Tensor& inverse() const { return ginv_; }
  const Jet& det() const { return det_; }
  const Tensor& christoffel() const;
  const Tensor& riemann() const;
  const Tensor& ricci() const;
  const Jet& scalar() const;

  Jet zero(int order) const { return Jet::constant(jet_dim_, order, 0.0); }
  Tensor zeros(std::vector<Slot> slots, int order) const { return Tensor(n_, std::move(slots), jet_dim_, order); }

  Tensor raise(const Tensor& t, int slot) const;
  Tensor lower(const Tensor& t, int slot) const;
  // ∇T with the derivative index as a new leading Down slot.
  Tensor covariant_derivative(const Tensor& t) const;
  // Coordinate partial derivatives ∂_i T as a new leading slot.
  Tensor partial_derivative(const Tensor& t) const;

 private:
  void require_order(int k, const char* what) const;

  int n_ = 0;
  int jet_dim_ = 0;
  int order_ = 0;
  Tensor g_, ginv_, gamma_, riemann_, ricci_;
  Jet det_, scalar_;
};

struct ScalarCalculus {
  Tensor d;          // dθ
  Tensor grad;       // ∇θ
  Tensor hessian;    // Hes(θ)
  Jet laplacian;     // Δθ
  Jet grad_sq;       // |∇θ|², negative for timelike gradients
};

ScalarCalculus scalar_calculus(const LocalGeometry& geo, const Jet& f);

// Contraction of ∇T on the first slot against the derivative index:
// vectors ∇_i X^i, 1-forms and (0,2) tensors g^ik ∇_i T_k..., and for (1,1)
// operators the argument slot, (div F)^a = g^ib ∇_i F^a_b, so that
// div Ω(X) = <div F, X> when <F(X), Y> = Ω(X, Y).
Tensor divergence(const LocalGeometry& geo, const Tensor& t);

// Coordinate exterior derivative of a 0-, 1- or 2-form.
Tensor exterior_derivative(const Tensor& form);

// Full contraction <T, S> pairing every slot through g^ij or g_ij.
Jet tensor_inner(const LocalGeometry& geo, const Tensor& t, const Tensor& s);
// Trace of a (1,1) operator and of a composition T∘S.
Jet trace(const Tensor& op);
Jet trace_product(const Tensor& t, const Tensor& s);
// (T X)^a = T^a_b X^b.
Tensor apply(const Tensor& op, const Tensor& vec);
// <X, Y> for two vectors.
Jet inner_vectors(const LocalGeometry& geo, const Tensor& x, const Tensor& y);
// Operator F^a_b = g^ak ω_bk so that <F(X), Y> = ω(X, Y).
Tensor operator_from_form(const LocalGeometry& geo, const Tensor& form);

}  // namespace affgeo
