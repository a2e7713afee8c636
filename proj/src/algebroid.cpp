#include "affgeo/algebroid.hpp"

#include <algorithm>
#include <cmath>

#include "affgeo/errors.hpp"

namespace affgeo {

namespace {

Eigen::MatrixXd matrix_values(const Tensor& t) {
  const int n = t.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = t(i, j).value();
  return m;
}

Eigen::VectorXd vector_values(const Tensor& t) {
  Eigen::VectorXd v(t.dim());
  for (int i = 0; i < t.dim(); ++i) v[i] = t(i).value();
  return v;
}

// ω(X, Y) for a (0,2) tensor and two vector fields.
Jet pair(const Tensor& w, const Tensor& x, const Tensor& y) {
  const int n = w.dim();
  Jet acc = Jet::constant(x(0).dim(), std::min({w.order(), x.order(), y.order()}), 0.0);
  for (int i = 0; i < n; ++i) {
    Jet row = Jet::constant(x(0).dim(), acc.order(), 0.0);
    for (int j = 0; j < n; ++j) row.add_product(w(i, j), y(j));
    acc.add_product(x(i), row);
  }
  return acc;
}

// X(φ) = X^i ∂_i φ.
Jet directional(const Tensor& x, const Jet& phi) {
  Jet acc = Jet::constant(phi.dim(), std::min(x.order(), phi.order() - 1), 0.0);
  for (int i = 0; i < x.dim(); ++i) acc.add_product(x(i), phi.derivative(i));
  return acc;
}

// α(X) for a 1-form.
Jet contract_form(const Tensor& alpha, const Tensor& x) {
  Jet acc = Jet::constant(x(0).dim(), std::min(alpha.order(), x.order()), 0.0);
  for (int i = 0; i < x.dim(); ++i) acc.add_product(alpha(i), x(i));
  return acc;
}

Tensor scaled(const Tensor& t, const Jet& c) { return c * t; }

Section make_section(Tensor x, Jet f) { return Section{std::move(x), std::move(f)}; }

}  // namespace

SectionValue value_of(const Section& s) { return SectionValue{vector_values(s.x), s.f.value()}; }

double max_abs_difference(const SectionValue& a, const SectionValue& b) {
  double m = std::abs(a.f - b.f);
  if (a.x.size()) m = std::max(m, (a.x - b.x).cwiseAbs().maxCoeff());
  return m;
}

double max_abs_value(const SectionValue& a) {
  double m = std::abs(a.f);
  if (a.x.size()) m = std::max(m, a.x.cwiseAbs().maxCoeff());
  return m;
}

AffineGeometry::AffineGeometry(Tensor g, Tensor a_flat, Jet theta)
    : base_(std::move(g)), a_flat_(std::move(a_flat)), theta_(std::move(theta)) {
  n_ = base_.dim();
  if (a_flat_.dim() != n_ || a_flat_.rank() != 1 || a_flat_.slots()[0] != Slot::Down)
    fail(ErrorKind::DimensionMismatch, "A♭ must be a 1-form on the chart");
  order_ = std::min({base_.order(), a_flat_.order(), theta_.order()});
  exp_theta_ = exp(theta_);
  if (order_ < 1) return;

  omega_ = 0.5 * exterior_derivative(a_flat_);
  omega_theta_ = scaled(omega_, exp_theta_);
  f_ = operator_from_form(base_, omega_);
  f_theta_ = scaled(f_, exp_theta_);
  d_theta_ = base_.partial_derivative(Tensor::scalar(theta_));
  grad_theta_ = base_.raise(d_theta_, 0);
  grad_theta_sq_ = contract_form(d_theta_, grad_theta_);
  tr_ff_theta_ = trace_product(f_theta_, f_theta_);
  const Tensor low = base_.lower(f_theta_, 0);  // <F_θ ∂_j, ∂_a> as (a, j)
  ric_omega_theta_ = base_.zeros({Slot::Down, Slot::Down}, low.order());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int a = 0; a < n_; ++a) ric_omega_theta_(i, j).add_product(low(a, i), f_theta_(a, j));

  if (order_ < 2) return;
  hessian_theta_ = base_.covariant_derivative(d_theta_);
  laplacian_theta_ = base_.zero(order_ - 2);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) laplacian_theta_.add_product(base_.inverse()(i, j), hessian_theta_(i, j));
  s_theta_ = hessian_theta_ + outer(d_theta_, d_theta_);
  nabla_f_theta_ = base_.covariant_derivative(f_theta_);
  div_f_theta_ = divergence(base_, f_theta_);
  div_f_ = divergence(base_, f_);
  nabla_grad_theta_ = base_.covariant_derivative(grad_theta_);
}

AffineGeometry AffineGeometry::at(const AffineMetricSpec& spec, std::span<const double> point, int order) {
  if (static_cast<int>(point.size()) != spec.dim()) fail(ErrorKind::DimensionMismatch, "point dimension");
  return AffineGeometry(spec.g.jets(point, order), field_jets(spec.a_flat, Slot::Down, point, order),
                        eval_jet(spec.theta, point, order));
}

void AffineGeometry::require_second_order(const char* what) const {
  if (order_ < 2) fail(ErrorKind::Domain, std::string(what) + " needs jets of order >= 2");
}

const Tensor& AffineGeometry::hessian_theta() const {
  require_second_order("Hes(θ)");
  return hessian_theta_;
}
const Jet& AffineGeometry::laplacian_theta() const {
  require_second_order("Δθ");
  return laplacian_theta_;
}
const Tensor& AffineGeometry::s_theta() const {
  require_second_order("S_θ");
  return s_theta_;
}
const Tensor& AffineGeometry::nabla_f_theta() const {
  require_second_order("∇F_θ");
  return nabla_f_theta_;
}
const Tensor& AffineGeometry::div_f_theta() const {
  require_second_order("div F_θ");
  return div_f_theta_;
}
const Tensor& AffineGeometry::div_f() const {
  require_second_order("div F");
  return div_f_;
}

EmTensors AffineGeometry::em_tensors() const {
  if (order_ < 1) fail(ErrorKind::Domain, "Ω needs jets of order >= 1");
  EmTensors em;
  em.omega = omega_;
  em.omega_theta = omega_theta_;
  em.f = f_;
  em.f_theta = f_theta_;
  em.tr_ff_theta = tr_ff_theta_;
  if (order_ >= 2) em.div_f = div_f_;
  // ½(<∇_X A, Y> - <∇_Y A, X>) through the connection
  const Tensor na = base_.covariant_derivative(a_flat_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const double alt = 0.5 * (na(i, j).value() - na(j, i).value());
      em.omega_consistency = std::max(em.omega_consistency, std::abs(alt - omega_(i, j).value()));
    }
  return em;
}

Section AffineGeometry::basis(int a) const {
  Tensor x = base_.zeros({Slot::Up}, order_);
  Jet f = base_.zero(order_);
  if (a < n_)
    x(a) = Jet::constant(base_.jet_dim(), order_, 1.0);
  else
    f = Jet::constant(base_.jet_dim(), order_, 1.0);
  return make_section(std::move(x), std::move(f));
}

Jet AffineGeometry::inner(const Section& s1, const Section& s2) const {
  Jet r = inner_vectors(base_, s1.x, s2.x);
  r.add_product(s1.f, s2.f);
  return r;
}

Jet AffineGeometry::anchor_apply(const Section& s, const Jet& phi) const { return directional(s.x, phi); }

Section AffineGeometry::bracket(const Section& s1, const Section& s2) const {
  const int k = std::min({s1.x.order(), s2.x.order(), s1.f.order(), s2.f.order()}) - 1;
  if (k < 0) fail(ErrorKind::Domain, "bracket needs section jets of order >= 1");
  Tensor lie = base_.zeros({Slot::Up}, k);
  for (int c = 0; c < n_; ++c)
    for (int i = 0; i < n_; ++i) {
      lie(c).add_product(s1.x(i), s2.x(c).derivative(i));
      lie(c).add_product(s2.x(i), s1.x(c).derivative(i), -1.0);
    }
  Jet g1 = 2.0 * pair(omega_theta_, s1.x, s2.x);
  g1 += directional(s1.x, s2.f);
  g1 -= directional(s2.x, s1.f);
  g1.add_product(s2.f, contract_form(d_theta_, s1.x), -1.0);
  g1.add_product(s1.f, contract_form(d_theta_, s2.x));
  return make_section(std::move(lie), std::move(g1));
}

GSection AffineGeometry::bracket_g(const GSection& s1, const GSection& s2) const {
  const Section lifted = bracket(Section{s1.x, base_.zero(s1.x.order())}, Section{s2.x, base_.zero(s2.x.order())});
  Jet a = 2.0 * pair(omega_, s1.x, s2.x);
  a += directional(s1.x, s2.a);
  a -= directional(s2.x, s1.a);
  return GSection{lifted.x, std::move(a)};
}

GSection AffineGeometry::to_g_frame(const Section& s) const { return GSection{s.x, s.f * exp(-theta_)}; }

Section AffineGeometry::from_g_frame(const GSection& s) const { return Section{s.x, s.a * exp_theta_}; }

Tensor AffineGeometry::covariant_along(const Tensor& x, const Tensor& y) const {
  const Tensor& gam = base_.christoffel();
  const int k = std::min({x.order(), y.order() - 1, gam.order()});
  Tensor out = base_.zeros({Slot::Up}, k);
  for (int c = 0; c < n_; ++c)
    for (int i = 0; i < n_; ++i) {
      Jet inner = y(c).derivative(i);
      for (int j = 0; j < n_; ++j) inner.add_product(gam(c, i, j), y(j));
      out(c).add_product(x(i), inner);
    }
  return out;
}

Section AffineGeometry::connection(const Section& s1, const Section& s2) const {
  if (order_ < 1) fail(ErrorKind::Domain, "connection needs jets of order >= 1");
  // vector: ∇_X Y - f F_θ Y - h F_θ X - f h ∇θ;  G₁: Ω_θ(X,Y) + f dθ(Y) + X(h)
  Tensor v = covariant_along(s1.x, s2.x);
  const Tensor fy = apply(f_theta_, s2.x);
  const Tensor fx = apply(f_theta_, s1.x);
  const Jet fh = s1.f * s2.f;
  for (int c = 0; c < n_; ++c) {
    v(c).add_product(s1.f, fy(c), -1.0);
    v(c).add_product(s2.f, fx(c), -1.0);
    v(c).add_product(fh, grad_theta_(c), -1.0);
  }
  Jet g1 = pair(omega_theta_, s1.x, s2.x);
  g1.add_product(s1.f, contract_form(d_theta_, s2.x));
  g1 += directional(s1.x, s2.f);
  return make_section(std::move(v), std::move(g1));
}

Section AffineGeometry::connection_koszul(const Section& s1, const Section& s2) const {
  if (order_ < 1) fail(ErrorKind::Domain, "connection needs jets of order >= 1");
  const Section b12 = bracket(s1, s2);
  const Jet i12 = inner(s1, s2);
  std::vector<Jet> rhs;
  for (int k = 0; k <= n_; ++k) {
    const Section z = basis(k);
    Jet r = anchor_apply(s1, inner(s2, z));
    r += anchor_apply(s2, inner(s1, z));
    r -= anchor_apply(z, i12);
    r += inner(b12, z);
    r -= inner(bracket(s2, z), s1);
    r += inner(bracket(z, s1), s2);
    rhs.push_back(0.5 * r);
  }
  int k = rhs[0].order();
  for (const Jet& r : rhs) k = std::min(k, r.order());
  Tensor v = base_.zeros({Slot::Up}, k);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) v(a).add_product(base_.inverse()(a, b), rhs[b]);
  return make_section(std::move(v), rhs[n_]);
}

namespace {

// Point values entering the closed-form curvature blocks.
struct CurvatureData {
  int n;
  Eigen::MatrixXd g, f, omega;
  std::vector<Eigen::MatrixXd> nf;  // nf[i](a, b) = (∇_i F_θ)^a_b
  Eigen::MatrixXd ngrad;            // (i, a) = ∇_i (∇θ)^a
  Eigen::MatrixXd s;
  Eigen::VectorXd dtheta, grad;
  const Tensor* riemann;

  Eigen::VectorXd nabla_f(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) r += x[i] * (nf[i] * y);
    return r;
  }
  Eigen::VectorXd base_curvature(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    const Tensor& R = *riemann;
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) r[l] += R(l, k, i, j).value() * x[i] * y[j] * z[k];
    return r;
  }
  double ip(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const { return u.dot(g * v); }

  // R̂(X̄, G₁) G₁
  SectionValue b6(const Eigen::VectorXd& x) const {
    return {-(ngrad.transpose() * x + dtheta.dot(x) * grad + f * (f * x)), 0.0};
  }
  // R̂(X̄, G₁) Ȳ
  SectionValue b7(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    SectionValue r;
    r.f = x.dot(s * y) - ip(f * x, f * y);
    r.x = x.dot(omega * y) * grad - nabla_f(x, y) - dtheta.dot(x) * (f * y) - dtheta.dot(y) * (f * x);
    return r;
  }
  // R̂(X̄, Ȳ) G₁
  SectionValue b8(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    return {nabla_f(y, x) - nabla_f(x, y) + 2.0 * x.dot(omega * y) * grad, 0.0};
  }
  // R̂(X̄, Ȳ) Z̄
  SectionValue b9(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z) const {
    const Eigen::VectorXd fx = f * x, fy = f * y, fz = f * z;
    SectionValue r;
    r.x = base_curvature(x, y, z) + ip(z, fx) * fy - ip(z, fy) * fx + 2.0 * ip(fx, y) * fz;
    r.f = -2.0 * dtheta.dot(z) * x.dot(omega * y) + ip(nabla_f(x, y) - nabla_f(y, x), z);
    return r;
  }
};

void axpy(SectionValue& acc, double c, const SectionValue& v) {
  acc.x += c * v.x;
  acc.f += c * v.f;
}

}  // namespace

SectionValue AffineGeometry::curvature(const SectionValue& s1, const SectionValue& s2, const SectionValue& s3) const {
  require_second_order("curvature");
  CurvatureData d;
  d.n = n_;
  d.g = matrix_values(base_.metric());
  d.f = matrix_values(f_theta_);
  d.omega = matrix_values(omega_theta_);
  for (int i = 0; i < n_; ++i) {
    Eigen::MatrixXd m(n_, n_);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) m(a, b) = nabla_f_theta_(i, a, b).value();
    d.nf.push_back(std::move(m));
  }
  d.ngrad = matrix_values(nabla_grad_theta_);
  d.s = matrix_values(s_theta_);
  d.dtheta = vector_values(d_theta_);
  d.grad = vector_values(grad_theta_);
  d.riemann = &base_.riemann();

  // multilinear expansion over s_i = X̄_i + f_i G₁, using R̂(G₁,·) = -R̂(·,G₁)
  SectionValue r{Eigen::VectorXd::Zero(n_), 0.0};
  axpy(r, 1.0, d.b9(s1.x, s2.x, s3.x));
  axpy(r, s3.f, d.b8(s1.x, s2.x));
  axpy(r, s2.f, d.b7(s1.x, s3.x));
  axpy(r, s2.f * s3.f, d.b6(s1.x));
  axpy(r, -s1.f, d.b7(s2.x, s3.x));
  axpy(r, -s1.f * s3.f, d.b6(s2.x));
  return r;
}

SectionValue AffineGeometry::curvature_direct(const Section& s1, const Section& s2, const Section& s3) const {
  require_second_order("curvature");
  const Section a = connection(s2, s3);
  const Section b = connection(s1, s3);
  const SectionValue t1 = value_of(connection(s1, a));
  const SectionValue t2 = value_of(connection(s2, b));
  const SectionValue t3 = value_of(connection(bracket(s1, s2), s3));
  return SectionValue{t1.x - t2.x - t3.x, t1.f - t2.f - t3.f};
}

CurvatureTable AffineGeometry::curvature_direct_basis() const {
  require_second_order("curvature");
  const int m = n_ + 1;
  std::vector<Section> e;
  for (int a = 0; a < m; ++a) e.push_back(basis(a));
  std::vector<Section> first;  // ∇̂_{e_b} e_c
  for (int b = 0; b < m; ++b)
    for (int c = 0; c < m; ++c) first.push_back(connection(e[b], e[c]));
  CurvatureTable table(n_);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const Section br = bracket(e[a], e[b]);
      for (int c = 0; c < m; ++c) {
        const SectionValue t1 = value_of(connection(e[a], first[b * m + c]));
        const SectionValue t2 = value_of(connection(e[b], first[a * m + c]));
        const SectionValue t3 = value_of(connection(br, e[c]));
        table(a, b, c) = SectionValue{t1.x - t2.x - t3.x, t1.f - t2.f - t3.f};
      }
    }
  return table;
}

CurvatureTable AffineGeometry::curvature_closed_basis() const {
  const int m = n_ + 1;
  std::vector<SectionValue> e;
  for (int a = 0; a < m; ++a) {
    SectionValue v{Eigen::VectorXd::Zero(n_), 0.0};
    if (a < n_)
      v.x[a] = 1.0;
    else
      v.f = 1.0;
    e.push_back(v);
  }
  CurvatureTable table(n_);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) table(a, b, c) = curvature(e[a], e[b], e[c]);
  return table;
}

HatRicci AffineGeometry::ricci() const {
  require_second_order("Ricci");
  HatRicci r;
  r.g1g1 = -tr_ff_theta_.value() - laplacian_theta_.value() - grad_theta_sq_.value();
  const Eigen::MatrixXd g = metric_values();
  const Eigen::VectorXd v = vector_values(div_f_theta_) + 2.0 * (matrix_values(f_theta_) * vector_values(grad_theta_));
  r.x_g1 = g * v;
  r.g1_x = r.x_g1;
  r.xy = matrix_values(base_.ricci()) - 2.0 * matrix_values(ric_omega_theta_) - matrix_values(s_theta_);
  return r;
}

HatRicci AffineGeometry::ricci_from_curvature(const CurvatureTable& t, const Eigen::MatrixXd& ginv,
                                              const Eigen::MatrixXd& g) {
  const int n = t.dim();
  // <R̂(U, e_a) e^a, ·> as a section value
  auto traced = [&](int u) {
    SectionValue acc{Eigen::VectorXd::Zero(n), 0.0};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) axpy(acc, ginv(i, j), t(u, i, j));
    axpy(acc, 1.0, t(u, n, n));
    return acc;
  };
  HatRicci r;
  r.x_g1.resize(n);
  r.g1_x.resize(n);
  r.xy.resize(n, n);
  for (int u = 0; u <= n; ++u) {
    const SectionValue s = traced(u);
    const Eigen::VectorXd low = g * s.x;
    if (u < n) {
      r.xy.row(u) = low.transpose();
      r.x_g1[u] = s.f;
    } else {
      r.g1_x = low;
      r.g1g1 = s.f;
    }
  }
  return r;
}

double AffineGeometry::scalar() const {
  require_second_order("scalar curvature");
  return base_.scalar().value() + tr_ff_theta_.value() -
         2.0 * (laplacian_theta_.value() + grad_theta_sq_.value());
}

double AffineGeometry::scalar_from_ricci(const HatRicci& ric, const Eigen::MatrixXd& ginv) {
  return ric.g1g1 + (ginv.cwiseProduct(ric.xy)).sum();
}

double AffineGeometry::bianchi_omega_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                              const Eigen::VectorXd& z) const {
  require_second_order("∇Ω");
  const Tensor no = base_.covariant_derivative(omega_);
  auto term = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) s += no(i, j, k).value() * a[i] * b[j] * c[k];
    return s;
  };
  return term(x, y, z) + term(y, z, x) + term(z, x, y);
}

Eigen::MatrixXd AffineGeometry::metric_values() const { return matrix_values(base_.metric()); }
Eigen::MatrixXd AffineGeometry::inverse_values() const { return matrix_values(base_.inverse()); }

}  // namespace affgeo
