#include "affgeo/variation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>

#include "affgeo/errors.hpp"
#include "affgeo/parallel.hpp"

namespace affgeo {

namespace {

double sqrt_abs_det(const Jet& det) { return std::sqrt(std::abs(det.value())); }

// Sum of |terms|; the scale that rel_err is measured against.
double abs_sum(std::initializer_list<double> terms) {
  double s = 0.0;
  for (double t : terms) s += std::abs(t);
  return s;
}

}  // namespace

void DeformationFamily::validate() const {
  base.validate();
  const int n = base.dim();
  if (s.dim() != n) fail(ErrorKind::DimensionMismatch, "deformation s must match the chart dimension");
  if (static_cast<int>(delta.size()) != n) fail(ErrorKind::DimensionMismatch, "deformation δ needs one component per coordinate");
  auto same = [&](const Expression& e) {
    if (!e.valid() || e.coords() != base.chart.coords)
      fail(ErrorKind::Validation, "deformation expression is not defined over the chart coordinates");
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) same(s.component(i, j));
  for (const auto& e : delta) same(e);
  same(h);
  if (!(t0 > 0.0)) fail(ErrorKind::Validation, "finite-difference step must be positive");
}

AffineGeometry DeformationFamily::at(std::span<const double> p, double t, int order) const {
  if (static_cast<int>(p.size()) != base.dim()) fail(ErrorKind::DimensionMismatch, "point dimension");
  Tensor g = base.g.jets(p, order);
  Tensor a = field_jets(base.a_flat, Slot::Down, p, order);
  Jet theta = eval_jet(base.theta, p, order);
  if (t != 0.0) {
    const Jet hj = eval_jet(h, p, order);
    g += t * s.jets(p, order);
    // A♭ + Γ_t with Γ_t = -t e^{-2th} δ
    a -= exp(-2.0 * t * hj) * t * field_jets(delta, Slot::Down, p, order);
    theta += t * hj;
  }
  try {
    return AffineGeometry(std::move(g), std::move(a), std::move(theta));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularMetric && t != 0.0)
      fail(ErrorKind::DegenerateFamily, "g + t s is singular at t = " + std::to_string(t));
    throw;
  }
}

double DeformationFamily::t_max(std::span<const double> p) const {
  const int n = base.dim();
  Eigen::MatrixXd g(n, n), sv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g(i, j) = evaluate(base.g.component(i, j), p);
      sv(i, j) = evaluate(s.component(i, j), p);
    }
  // det(g + t s) = 0 exactly when -1/t is an eigenvalue of g^{-1} s
  const Eigen::VectorXcd mu = Eigen::EigenSolver<Eigen::MatrixXd>(g.inverse() * sv, false).eigenvalues();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : mu)
    if (std::abs(m.imag()) <= 1e-12 * (1.0 + std::abs(m.real())) && m.real() != 0.0)
      best = std::min(best, 1.0 / std::abs(m.real()));
  return best;
}

const char* to_string(VariationQuantity q) {
  switch (q) {
    case VariationQuantity::VolumeDensity: return "volume_density";
    case VariationQuantity::LaplacianTheta: return "laplacian_theta";
    case VariationQuantity::GradThetaSq: return "grad_theta_sq";
    case VariationQuantity::OmegaPrime: return "omega_prime";
    case VariationQuantity::TrFF: return "tr_FF";
  }
  return "?";
}

std::vector<VariationQuantity> all_variation_quantities() {
  return {VariationQuantity::VolumeDensity, VariationQuantity::LaplacianTheta, VariationQuantity::GradThetaSq,
          VariationQuantity::OmegaPrime, VariationQuantity::TrFF};
}

VariationQuantity parse_variation_quantity(const std::string& name) {
  for (auto q : all_variation_quantities())
    if (name == to_string(q)) return q;
  fail(ErrorKind::Validation, "unknown variation quantity '" + name + "'");
}

namespace {

std::vector<double> observe(const AffineGeometry& geo, VariationQuantity which) {
  switch (which) {
    case VariationQuantity::VolumeDensity: return {sqrt_abs_det(geo.base().det())};
    case VariationQuantity::LaplacianTheta: return {geo.laplacian_theta().value()};
    case VariationQuantity::GradThetaSq: return {geo.grad_theta_sq().value()};
    case VariationQuantity::OmegaPrime: return geo.omega().values();
    case VariationQuantity::TrFF: return {geo.tr_ff_theta().value()};
  }
  return {};
}

}  // namespace

PointwiseVariation first_variation_pointwise(const DeformationFamily& fam, std::span<const double> p,
                                             VariationQuantity which) {
  constexpr int K = 2;
  const AffineGeometry geo = fam.at(p, 0.0, K);
  const LocalGeometry& base = geo.base();
  const Tensor s = fam.s.jets(p, K);
  const Jet h = eval_jet(fam.h, p, K);

  PointwiseVariation out;
  switch (which) {
    case VariationQuantity::VolumeDensity: {
      const double vol = sqrt_abs_det(base.det());
      const double v = 0.5 * tensor_inner(base, base.metric(), s).value() * vol;
      out.analytic = {v};
      out.scale = std::abs(v);
      break;
    }
    case VariationQuantity::LaplacianTheta: {
      const double lap_h = scalar_calculus(base, h).laplacian.value();
      const Tensor s_grad = contract(outer(s, geo.grad_theta()), 1, 2);
      const double div_term = divergence(base, s_grad).at_flat(0).value();
      const Jet tr_s = tensor_inner(base, base.metric(), s);
      const double grad_term = 0.5 * inner_vectors(base, scalar_calculus(base, tr_s).grad, geo.grad_theta()).value();
      out.analytic = {lap_h - div_term + grad_term};
      out.scale = abs_sum({lap_h, div_term, grad_term});
      break;
    }
    case VariationQuantity::GradThetaSq: {
      const double st = tensor_inner(base, s, outer(geo.d_theta(), geo.d_theta())).value();
      const double hh = 2.0 * inner_vectors(base, scalar_calculus(base, h).grad, geo.grad_theta()).value();
      out.analytic = {-st + hh};
      out.scale = abs_sum({st, hh});
      break;
    }
    case VariationQuantity::OmegaPrime: {
      const Tensor d_delta = exterior_derivative(field_jets(fam.delta, Slot::Down, p, K));
      out.analytic = (-0.5 * d_delta).values();
      for (double v : out.analytic) out.scale = std::max(out.scale, std::abs(v));
      break;
    }
    case VariationQuantity::TrFF: {
      const Tensor d_delta = exterior_derivative(field_jets(fam.delta, Slot::Down, p, K));
      const double a = 2.0 * tensor_inner(base, geo.ric_omega_theta(), s).value();
      const double b = geo.exp_theta().value() * tensor_inner(base, d_delta, geo.omega_theta()).value();
      const double c = 2.0 * h.value() * geo.tr_ff_theta().value();
      out.analytic = {a + b + c};
      out.scale = abs_sum({a, b, c});
      break;
    }
  }

  const auto plus = observe(fam.at(p, fam.t0, K), which);
  const auto minus = observe(fam.at(p, -fam.t0, K), which);
  out.numeric.resize(plus.size());
  for (std::size_t i = 0; i < plus.size(); ++i) {
    out.numeric[i] = (plus[i] - minus[i]) / (2.0 * fam.t0);
    out.abs_err = std::max(out.abs_err, std::abs(out.numeric[i] - out.analytic[i]));
  }
  out.rel_err = out.scale > 0.0 ? out.abs_err / out.scale : out.abs_err;
  return out;
}

std::size_t PeriodicBox::point_count() const {
  std::size_t c = 1;
  for (int i = 0; i < dim(); ++i) c *= static_cast<std::size_t>(resolution);
  return c;
}

std::vector<double> PeriodicBox::point(std::size_t index) const {
  std::vector<double> p(dim());
  for (int i = dim() - 1; i >= 0; --i) {
    const auto k = index % static_cast<std::size_t>(resolution);
    index /= static_cast<std::size_t>(resolution);
    p[i] = (origin.empty() ? 0.0 : origin[i]) + periods[i] * static_cast<double>(k) / resolution;
  }
  return p;
}

double PeriodicBox::cell_volume() const {
  double v = 1.0;
  for (double L : periods) v *= L / resolution;
  return v;
}

void PeriodicBox::validate() const {
  if (dim() < 2 || dim() > kMaxJetDim) fail(ErrorKind::Validation, "periodic box dimension must be in [2, 8]");
  if (!origin.empty() && static_cast<int>(origin.size()) != dim())
    fail(ErrorKind::DimensionMismatch, "box origin and periods differ in length");
  for (double L : periods)
    if (!(L > 0.0)) fail(ErrorKind::Validation, "box periods must be positive");
  if (resolution < 2) fail(ErrorKind::Validation, "box resolution must be at least 2");
}

double integrate_periodic(const PeriodicBox& box, const std::function<double(std::span<const double>)>& f,
                          int threads) {
  box.validate();
  std::vector<double> values(box.point_count());
  parallel_for(values.size(), threads, [&](std::size_t i) {
    const auto p = box.point(i);
    values[i] = f(p);
  });
  return pairwise_sum(values) * box.cell_volume();
}

void check_periodic(const PeriodicBox& box, const std::vector<const Expression*>& fields) {
  box.validate();
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = box.dim();
  for (int probe = 0; probe < 8; ++probe) {
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = (box.origin.empty() ? 0.0 : box.origin[i]) + box.periods[i] * unit(rng);
    for (int axis = 0; axis < n; ++axis) {
      auto q = p;
      q[axis] += box.periods[axis];
      for (const Expression* e : fields) {
        if (e->dim() != n) fail(ErrorKind::DimensionMismatch, "field dimension differs from the box");
        const double a = evaluate(*e, p), b = evaluate(*e, q);
        if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a)))
          fail(ErrorKind::Validation, "field '" + e->to_string() + "' is not periodic along " + e->coords()[axis]);
      }
    }
  }
}

std::vector<const Expression*> spec_fields(const AffineMetricSpec& spec) {
  std::vector<const Expression*> out;
  const int n = spec.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) out.push_back(&spec.g.component(i, j));
  for (const auto& e : spec.a_flat) out.push_back(&e);
  out.push_back(&spec.theta);
  return out;
}

std::vector<const Expression*> family_fields(const DeformationFamily& fam) {
  auto out = spec_fields(fam.base);
  const int n = fam.base.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) out.push_back(&fam.s.component(i, j));
  for (const auto& e : fam.delta) out.push_back(&e);
  out.push_back(&fam.h);
  return out;
}

double action_integral(const AffineMetricSpec& spec, const PeriodicBox& box, int threads) {
  return integrate_periodic(
      box,
      [&](std::span<const double> p) {
        const AffineGeometry geo = AffineGeometry::at(spec, p, 2);
        return geo.scalar() * sqrt_abs_det(geo.base().det());
      },
      threads);
}

double action_integral(const DeformationFamily& fam, double t, const PeriodicBox& box, int threads) {
  return integrate_periodic(
      box,
      [&](std::span<const double> p) {
        const AffineGeometry geo = fam.at(p, t, 2);
        return geo.scalar() * sqrt_abs_det(geo.base().det());
      },
      threads);
}

double euler_lagrange_density(const DeformationFamily& fam, std::span<const double> p) {
  constexpr int K = 2;
  const AffineGeometry geo = fam.at(p, 0.0, K);
  const LocalGeometry& base = geo.base();
  const Tensor s = fam.s.jets(p, K);
  const Tensor delta = field_jets(fam.delta, Slot::Down, p, K);
  const double h = evaluate(fam.h, p);

  const double tr = geo.tr_ff_theta().value();
  const double coeff = 0.5 * base.scalar().value() + 0.5 * tr - geo.grad_theta_sq().value();
  const double e_s = -tensor_inner(base, base.ricci(), s).value() +
                     2.0 * tensor_inner(base, geo.ric_omega_theta(), s).value() +
                     coeff * tensor_inner(base, base.metric(), s).value() +
                     2.0 * tensor_inner(base, s, outer(geo.d_theta(), geo.d_theta())).value();
  const Tensor w = geo.exp_theta() * geo.omega_theta();
  const double e_delta = -2.0 * tensor_inner(base, delta, divergence(base, w)).value();
  const double e_h = (2.0 * tr + 4.0 * geo.laplacian_theta().value()) * h;
  return (e_s + e_delta + e_h) * sqrt_abs_det(base.det());
}

ActionVariation action_variation(const DeformationFamily& fam, const PeriodicBox& box, int threads) {
  if (box.resolution < 16) fail(ErrorKind::Validation, "action variation needs resolution >= 16");
  check_periodic(box, family_fields(fam));
  ActionVariation out;
  const double lp = action_integral(fam, fam.t0, box, threads);
  const double lm = action_integral(fam, -fam.t0, box, threads);
  out.numeric = (lp - lm) / (2.0 * fam.t0);
  out.analytic = integrate_periodic(box, [&](std::span<const double> p) { return euler_lagrange_density(fam, p); },
                                    threads);
  out.abs_err = std::abs(out.numeric - out.analytic);
  const double scale = std::max(std::abs(out.numeric), std::abs(out.analytic));
  out.rel_err = scale > 0.0 ? out.abs_err / scale : out.abs_err;
  return out;
}

}  // namespace affgeo
