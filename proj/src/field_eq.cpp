#include "affgeo/field_eq.hpp"

#include "affgeo/errors.hpp"

namespace affgeo {

namespace {

void require(const AffineGeometry& geo, int k, const char* what) {
  if (geo.order() < k)
    fail(ErrorKind::Domain, std::string(what) + " needs jets of order >= " + std::to_string(k));
}

// |F|² = <F, F> = Σ <F(E_i), F(E^i)> = -tr(F∘F)
Jet f_norm_sq(const AffineGeometry& geo) { return -trace_product(geo.f(), geo.f()); }

}  // namespace

StressTensors stress_tensors(const AffineGeometry& geo) {
  require(geo, 1, "stress tensors");
  const Tensor& g = geo.base().metric();
  StressTensors st;
  st.t_omega_theta = 2.0 * geo.ric_omega_theta() + (0.5 * geo.tr_ff_theta()) * g;
  st.t_theta = 2.0 * outer(geo.d_theta(), geo.d_theta()) - geo.grad_theta_sq() * g;
  return st;
}

FieldEquationResiduals residuals(const AffineGeometry& geo) {
  require(geo, 2, "field equation residuals");
  const LocalGeometry& base = geo.base();
  const Tensor& g = base.metric();
  const Tensor dd = outer(geo.d_theta(), geo.d_theta());
  const Tensor source = 2.0 * geo.ric_omega_theta() + 2.0 * dd;

  FieldEquationResiduals r;
  r.m1_big = base.ricci() - source - (0.5 * geo.tr_ff_theta()) * g;
  r.m1_small = base.ricci() - (0.5 * base.scalar()) * g - source -
               (0.5 * geo.tr_ff_theta() - geo.grad_theta_sq()) * g;
  r.m2 = divergence(base, geo.exp_theta() * geo.omega_theta());
  const Tensor low_div = base.lower(geo.div_f(), 0);
  r.m2_equiv = low_div;
  const int n = geo.dim();
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < n; ++a) r.m2_equiv(x).add_product(geo.d_theta()(a), geo.f()(a, x), -2.0);
  r.m3 = geo.laplacian_theta() + 0.5 * geo.tr_ff_theta();
  if (n == 4) r.trace4 = base.scalar() - 2.0 * geo.grad_theta_sq();
  return r;
}

DivergenceIdentities divergence_identities(const AffineGeometry& geo) {
  require(geo, 3, "divergence identities");
  const LocalGeometry& base = geo.base();
  const Tensor& g = base.metric();
  const int n = geo.dim();
  DivergenceIdentities d;

  // Ric_Ω(X, Y) = <F X, F Y>
  const Tensor low = base.lower(geo.f(), 0);
  Tensor ric_omega = base.zeros({Slot::Down, Slot::Down}, low.order());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a) ric_omega(i, j).add_product(low(a, i), geo.f()(a, j));
  const Jet fsq = f_norm_sq(geo);
  const Tensor dfsq = base.partial_derivative(Tensor::scalar(fsq));
  const Tensor divf_low = base.lower(geo.div_f(), 0);

  d.div_ric_omega = divergence(base, ric_omega);
  for (int x = 0; x < n; ++x) {
    for (int a = 0; a < n; ++a) d.div_ric_omega(x).add_product(divf_low(a), geo.f()(a, x), -1.0);
    d.div_ric_omega(x) -= 0.25 * dfsq(x);
  }

  d.div_trff_g = divergence(base, (-fsq) * g) + dfsq;

  const StressTensors st = stress_tensors(geo);
  d.div_t_theta = divergence(base, st.t_theta) - (2.0 * geo.laplacian_theta()) * geo.d_theta();
  d.div_t_omega = divergence(base, st.t_omega_theta) - geo.tr_ff_theta() * geo.d_theta();
  d.m2 = residuals(geo).m2;
  return d;
}

Conservation conservation_check(const AffineGeometry& geo) {
  require(geo, 3, "conservation check");
  const StressTensors st = stress_tensors(geo);
  Conservation c;
  c.divergence = divergence(geo.base(), st.t_omega_theta + st.t_theta);
  const FieldEquationResiduals r = residuals(geo);
  c.m2 = r.m2.max_abs_value();
  c.m3 = std::abs(r.m3.value());
  return c;
}

}  // namespace affgeo
