#pragma once

// The extended bundle T̂M = T̄M ⊕ span(G) of an affine metric (g, A♭, θ).
//
// Sections are stored in the unit frame G₁ = e^{-θ} G: a Section (X, f) is
// X̄ + f G₁. The bundle metric is <X̄ + f G₁, Ȳ + h G₁> = g(X, Y) + f h and the
// anchor is ρ(X̄ + f G₁) = X. With Ω = ½ dA♭, Ω_θ = e^θ Ω, and F_θ defined by
// <F_θ(X), Y> = Ω_θ(X, Y):
//   [X̄, Ȳ]   = [X, Y]‾ + 2 Ω_θ(X, Y) G₁
//   [X̄, G₁]  = -dθ(X) G₁
// and ∇̂ is the Levi-Civita connection of that bracket and metric.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "affgeo/geometry.hpp"
#include "affgeo/spec.hpp"

namespace affgeo {

// Section field X̄ + f G₁ with jet components.
struct Section {
  Tensor x;  // vector
  Jet f;
};

// The same kind of section in the G frame: X̄ + a G, with a = f e^{-θ}.
struct GSection {
  Tensor x;
  Jet a;
};

struct SectionValue {
  Eigen::VectorXd x;
  double f = 0.0;
};

SectionValue value_of(const Section& s);
double max_abs_difference(const SectionValue& a, const SectionValue& b);
double max_abs_value(const SectionValue& a);

struct EmTensors {
  Tensor omega;        // Ω = ½ dA♭
  Tensor omega_theta;  // e^θ Ω
  Tensor f;            // F, (1,1)
  Tensor f_theta;      // e^θ F
  Jet tr_ff_theta;     // tr(F_θ∘F_θ)
  Tensor div_f;        // div F (vector), needs order >= 2
  // max |½ dA♭ - ½(∇_i A_j - ∇_j A_i)|
  double omega_consistency = 0.0;
};

struct HatRicci {
  double g1g1 = 0.0;       // R̂ic(G₁, G₁)
  Eigen::VectorXd x_g1;    // R̂ic(∂̄_i, G₁)
  Eigen::VectorXd g1_x;    // R̂ic(G₁, ∂̄_i)
  Eigen::MatrixXd xy;      // R̂ic(∂̄_i, ∂̄_j)
};

// R̂(e_a, e_b) e_c for the basis e_0..e_{n-1} = ∂̄_i, e_n = G₁.
class CurvatureTable {
 public:
  CurvatureTable(int n) : n_(n), data_(static_cast<std::size_t>(n + 1) * (n + 1) * (n + 1)) {}
  SectionValue& operator()(int a, int b, int c) { return data_[(a * (n_ + 1) + b) * (n_ + 1) + c]; }
  const SectionValue& operator()(int a, int b, int c) const { return data_[(a * (n_ + 1) + b) * (n_ + 1) + c]; }
  int dim() const { return n_; }

 private:
  int n_;
  std::vector<SectionValue> data_;
};

class AffineGeometry {
 public:
  // Jets of order K for g (0,2), A♭ (1-form) and θ. Connection data needs
  // K >= 1; curvature, Ricci and divergences need K >= 2.
  AffineGeometry(Tensor g, Tensor a_flat, Jet theta);
  static AffineGeometry at(const AffineMetricSpec& spec, std::span<const double> point, int order);

  const LocalGeometry& base() const { return base_; }
  int dim() const { return n_; }
  int order() const { return order_; }

  const Jet& theta() const { return theta_; }
  const Jet& exp_theta() const { return exp_theta_; }
  const Tensor& a_flat() const { return a_flat_; }
  const Tensor& omega() const { return omega_; }
  const Tensor& omega_theta() const { return omega_theta_; }
  const Tensor& f() const { return f_; }
  const Tensor& f_theta() const { return f_theta_; }
  const Tensor& d_theta() const { return d_theta_; }
  const Tensor& grad_theta() const { return grad_theta_; }
  const Jet& grad_theta_sq() const { return grad_theta_sq_; }
  const Jet& tr_ff_theta() const { return tr_ff_theta_; }
  // Ric^θ_Ω(X, Y) = <F_θ X, F_θ Y>
  const Tensor& ric_omega_theta() const { return ric_omega_theta_; }

  // Second-order data (K >= 2).
  const Tensor& hessian_theta() const;
  const Jet& laplacian_theta() const;
  const Tensor& s_theta() const;
  const Tensor& nabla_f_theta() const;  // (i, a, b) = (∇_i F_θ)^a_b
  const Tensor& div_f_theta() const;
  const Tensor& div_f() const;

  EmTensors em_tensors() const;

  Section basis(int a) const;
  Jet inner(const Section& s1, const Section& s2) const;
  // ρ(s) φ
  Jet anchor_apply(const Section& s, const Jet& phi) const;
  Section bracket(const Section& s1, const Section& s2) const;
  GSection bracket_g(const GSection& s1, const GSection& s2) const;
  GSection to_g_frame(const Section& s) const;
  Section from_g_frame(const GSection& s) const;

  // Closed-form connection.
  Section connection(const Section& s1, const Section& s2) const;
  // Connection solved from the Koszul formula against {∂̄_k} ∪ {G₁}.
  Section connection_koszul(const Section& s1, const Section& s2) const;

  // Closed-form curvature assembled from the four basic blocks.
  SectionValue curvature(const SectionValue& s1, const SectionValue& s2, const SectionValue& s3) const;
  // R̂(s1,s2)s3 = ∇̂_{s1}∇̂_{s2}s3 - ∇̂_{s2}∇̂_{s1}s3 - ∇̂_{[s1,s2]}s3 (K >= 2).
  SectionValue curvature_direct(const Section& s1, const Section& s2, const Section& s3) const;
  CurvatureTable curvature_direct_basis() const;
  CurvatureTable curvature_closed_basis() const;

  HatRicci ricci() const;
  // R̂ic(U, W) = Σ_a <R̂(U, e_a) e^a, W> with reciprocal basis {g^ij ∂̄_j, G₁}.
  static HatRicci ricci_from_curvature(const CurvatureTable& table, const Eigen::MatrixXd& ginv,
                                       const Eigen::MatrixXd& g);
  double scalar() const;
  static double scalar_from_ricci(const HatRicci& ric, const Eigen::MatrixXd& ginv);

  // (∇_X Ω)(Y,Z) + (∇_Y Ω)(Z,X) + (∇_Z Ω)(X,Y).
  double bianchi_omega_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z) const;

  Eigen::MatrixXd metric_values() const;
  Eigen::MatrixXd inverse_values() const;

 private:
  void require_second_order(const char* what) const;
  Tensor covariant_along(const Tensor& x, const Tensor& y) const;  // ∇_X Y

  LocalGeometry base_;
  int n_ = 0;
  int order_ = 0;
  Tensor a_flat_;
  Jet theta_, exp_theta_;
  Tensor omega_, omega_theta_, f_, f_theta_, d_theta_, grad_theta_, ric_omega_theta_;
  Jet grad_theta_sq_, tr_ff_theta_;
  Tensor hessian_theta_, s_theta_, nabla_f_theta_, div_f_theta_, div_f_, nabla_grad_theta_;
  Jet laplacian_theta_;
};

}  // namespace affgeo
