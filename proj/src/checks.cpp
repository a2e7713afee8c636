#include "affgeo/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "affgeo/errors.hpp"

namespace affgeo {

namespace {

CheckInfo make(const char* name, int order, double tol, const char* summary) {
  CheckInfo c;
  c.name = name;
  c.order = order;
  c.tolerance = tol;
  c.summary = summary;
  return c;
}

CheckInfo solution(CheckInfo c) {
  c.universal = false;
  return c;
}
CheckInfo scalar(CheckInfo c) {
  c.scalar = true;
  return c;
}
CheckInfo target(CheckInfo c) {
  c.target = true;
  c.scalar = true;
  return c;
}
CheckInfo conditional(CheckInfo c) {
  c.conditional = true;
  return c;
}

std::vector<CheckInfo> build_registry() {
  return {
      make("first_bianchi", 2, 1e-9, "R^l_kij + R^l_ijk + R^l_jki = 0"),
      make("contracted_bianchi", 3, 1e-6, "div(Ric - R g / 2) = 0"),
      make("metric_compatibility", 2, 1e-10, "div g = 0"),
      make("dd_zero", 2, 1e-12, "d(dθ) = 0 and d(dA♭) = 0"),
      make("s_theta_trace", 2, 1e-10, "tr S_θ = Δθ + |∇θ|²"),
      make("trff_omega", 2, 1e-10, "tr(F∘F) = -<Ω, Ω>"),
      make("omega_consistency", 2, 1e-10, "½dA♭ equals the antisymmetrized ∇A♭"),
      make("jacobi", 2, 1e-7, "Jacobi identity of the extended bracket on random sections"),
      make("anchor_bracket", 2, 1e-8, "ρ[s1, s2] = [ρ s1, ρ s2]"),
      make("bracket_frames", 2, 1e-10, "bracket in the G frame agrees with the G₁ frame"),
      make("prop1_vs_koszul", 2, 1e-9, "closed-form connection equals the Koszul solution on basis sections"),
      make("torsion_free", 2, 1e-8, "∇̂_a b - ∇̂_b a = [a, b] on basis sections"),
      make("metric_compat_hat", 2, 1e-8, "ρ(a)<b, c> = <∇̂_a b, c> + <b, ∇̂_a c> on basis sections"),
      make("prop2_vs_direct", 2, 1e-7, "closed-form curvature blocks equal the commutator curvature"),
      make("prop3_trace", 2, 1e-7, "closed-form Ricci blocks equal traces of the commutator curvature"),
      make("prop4_trace", 2, 1e-10, "closed-form scalar curvature equals the trace of the Ricci blocks"),
      make("bianchi", 2, 1e-8, "cyclic sum of ∇Ω vanishes on random vectors"),
      make("m1_M1_consistency", 2, 1e-12, "m1 - M1 + ½(R - 2|∇θ|²) g = 0"),
      make("div_ric_omega", 3, 1e-6, "div(Ric_Ω) = <div F, F(·)> + ¼ d|F|²"),
      make("div_trff_g", 3, 1e-6, "div(tr(F∘F) g) = -d|F|²"),
      make("div_t_theta", 3, 1e-6, "div(T^θ) = 2 Δθ dθ"),
      conditional(make("div_t_omega", 3, 1e-7, "div(T^Ω_θ) = tr(F_θ∘F_θ) dθ, given M2")),
      conditional(make("conservation", 3, 1e-7, "div(T^Ω_θ + T^θ) = 0, given M2 and M3")),
      solution(make("ricci", 2, 1e-9, "Ric = 0")),
      solution(target(make("scalar_curvature", 2, 1e-10, "R equals the target value"))),
      solution(target(make("hat_scalar", 2, 1e-10, "R̂ equals the target value"))),
      solution(make("M1", 2, 1e-9, "Ric = 2 Ric^θ_Ω + 2 dθ⊗dθ + ½ tr(F_θ∘F_θ) g")),
      solution(make("m1", 2, 1e-9, "Ric - ½ R g = T^Ω_θ + T^θ")),
      solution(make("M2", 2, 1e-9, "div(e^θ Ω_θ) = 0")),
      solution(make("M2_equiv", 2, 1e-9, "<div F, ·> = 2 dθ(F(·))")),
      solution(scalar(make("M3", 2, 1e-9, "Δθ = -½ tr(F_θ∘F_θ)"))),
      solution(scalar(make("trace4", 2, 1e-9, "R = 2|∇θ|² (4-dimensional charts only)"))),
  };
}

double max_abs(const SectionValue& v) { return max_abs_value(v); }

Jet random_poly(int n, int order, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Jet out = Jet::constant(n, order, u(rng));
  std::vector<Jet> v;
  for (int j = 0; j < n; ++j) v.push_back(Jet::variable(n, order, j, 0.0));
  for (int j = 0; j < n; ++j) {
    out += u(rng) * v[j];
    for (int k = j; k < n; ++k) out.add_product(v[j], v[k], u(rng));
  }
  return out;
}

Section random_section(const AffineGeometry& geo, std::mt19937_64& rng) {
  const int n = geo.dim();
  Section s{geo.base().zeros({Slot::Up}, geo.order()), Jet()};
  for (int i = 0; i < n; ++i) s.x(i) = random_poly(n, geo.order(), rng);
  s.f = random_poly(n, geo.order(), rng);
  return s;
}

double max_entry(std::initializer_list<double> xs) {
  double m = 1.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

using Evaluator = std::function<PointValue(PointContext&, double)>;

const std::map<std::string, Evaluator>& evaluators() {
  static const std::map<std::string, Evaluator> table = [] {
    std::map<std::string, Evaluator> m;

    m["first_bianchi"] = [](PointContext& c, double) {
      const Tensor& R = c.geo().base().riemann();
      const int n = c.geo().dim();
      double r = 0.0;
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              r = std::max(r, std::abs(R(l, k, i, j).value() + R(l, i, j, k).value() + R(l, j, k, i).value()));
      return PointValue{r, max_entry({R.max_abs_value()})};
    };
    m["contracted_bianchi"] = [](PointContext& c, double) {
      const LocalGeometry& b = c.geo().base();
      const Tensor einstein = b.ricci() - 0.5 * (b.scalar() * b.metric());
      const Tensor d = divergence(b, einstein);
      return PointValue{d.max_abs_value(), max_entry({b.covariant_derivative(b.ricci()).max_abs_value()})};
    };
    m["metric_compatibility"] = [](PointContext& c, double) {
      const LocalGeometry& b = c.geo().base();
      return PointValue{divergence(b, b.metric()).max_abs_value(),
                        max_entry({b.partial_derivative(b.metric()).max_abs_value()})};
    };
    m["dd_zero"] = [](PointContext& c, double) {
      const AffineGeometry& g = c.geo();
      const double r = std::max(exterior_derivative(exterior_derivative(Tensor::scalar(g.theta()))).max_abs_value(),
                                exterior_derivative(exterior_derivative(g.a_flat())).max_abs_value());
      return PointValue{r, 1.0};
    };
    m["s_theta_trace"] = [](PointContext& c, double) {
      const AffineGeometry& g = c.geo();
      const double tr = tensor_inner(g.base(), g.base().metric(), g.s_theta()).value();
      const double lap = g.laplacian_theta().value(), gs = g.grad_theta_sq().value();
      return PointValue{std::abs(tr - lap - gs), max_entry({g.s_theta().max_abs_value(), lap, gs})};
    };
    m["trff_omega"] = [](PointContext& c, double) {
      const AffineGeometry& g = c.geo();
      const double tr = trace_product(g.f(), g.f()).value();
      const double oo = tensor_inner(g.base(), g.omega(), g.omega()).value();
      return PointValue{std::abs(tr + oo), max_entry({tr, oo})};
    };
    m["omega_consistency"] = [](PointContext& c, double) {
      const AffineGeometry& g = c.geo();
      return PointValue{g.em_tensors().omega_consistency, max_entry({g.omega().max_abs_value()})};
    };
    m["jacobi"] = [](PointContext& c, double) {
      const AffineGeometry& g = c.geo();
      auto rng = c.rng("jacobi");
      const Section s1 = random_section(g, rng), s2 = random_section(g, rng), s3 = random_section(g, rng);
      const SectionValue j1 = value_of(g.bracket(g.bracket(s1, s2), s3));
      const SectionValue j2 = value_of(g.bracket(g.bracket(s2, s3), s1));
      const SectionValue j3 = value_of(g.bracket(g.bracket(s3, s1), s2));
      const double r = std::max(std::abs(j1.f + j2.f + j3.f), (j1.x + j2.x + j3.x).cwiseAbs().maxCoeff());
      return PointValue{r, max_entry({max_abs(j1), max_abs(j2), max_abs(j3)})};
    };
    m["anchor_bracket"] = [](PointContext& c, double) {
      const AffineGeometry& g = c.geo();
      auto rng = c.rng("anchor_bracket");
      const Section s1 = random_section(g, rng), s2 = random_section(g, rng);
      const Jet zero = g.base().zero(g.order());
      const SectionValue b = value_of(g.bracket(s1, s2));
      const SectionValue v = value_of(g.bracket(Section{s1.x, zero}, Section{s2.x, zero}));
      return PointValue{(b.x - v.x).cwiseAbs().maxCoeff(), max_entry({b.x.cwiseAbs().maxCoeff()})};
    };
    m["bracket_frames"] = [](PointContext& c, double) {
      const AffineGeometry& g = c.geo();
      auto rng = c.rng("bracket_frames");
      const Section s1 = random_section(g, rng), s2 = random_section(g, rng);
      const SectionValue b = value_of(g.bracket(s1, s2));
      const SectionValue via = value_of(g.from_g_frame(g.bracket_g(g.to_g_frame(s1), g.to_g_frame(s2))));
      return PointValue{max_abs_difference(b, via), max_entry({max_abs(b)})};
    };
    m["prop1_vs_koszul"] = [](PointContext& c, double) {
      const AffineGeometry& g = c.geo();
      PointValue out;
      for (int a = 0; a <= g.dim(); ++a)
        for (int b = 0; b <= g.dim(); ++b) {
          const SectionValue closed = value_of(g.connection(g.basis(a), g.basis(b)));
          const SectionValue koszul = value_of(g.connection_koszul(g.basis(a), g.basis(b)));
          out.residual = std::max(out.residual, max_abs_difference(closed, koszul));
          out.scale = std::max(out.scale, max_abs(closed));
        }
      return out;
    };
    m["torsion_free"] = [](PointContext& c, double) {
      const AffineGeometry& g = c.geo();
      PointValue out;
      for (int a = 0; a <= g.dim(); ++a)
        for (int b = 0; b <= g.dim(); ++b) {
          const SectionValue ab = value_of(g.connection(g.basis(a), g.basis(b)));
          const SectionValue ba = value_of(g.connection(g.basis(b), g.basis(a)));
          const SectionValue br = value_of(g.bracket(g.basis(a), g.basis(b)));
          const double r = std::max(std::abs(ab.f - ba.f - br.f), (ab.x - ba.x - br.x).cwiseAbs().maxCoeff());
          out.residual = std::max(out.residual, r);
          out.scale = std::max({out.scale, max_abs(ab), max_abs(br)});
        }
      return out;
    };
    m["metric_compat_hat"] = [](PointContext& c, double) {
      const AffineGeometry& g = c.geo();
      PointValue out;
      const int m1 = g.dim() + 1;
      for (int a = 0; a < m1; ++a) {
        std::vector<Section> nab;
        for (int b = 0; b < m1; ++b) nab.push_back(g.connection(g.basis(a), g.basis(b)));
        for (int b = 0; b < m1; ++b)
          for (int d = b; d < m1; ++d) {
            const double lhs = g.anchor_apply(g.basis(a), g.inner(g.basis(b), g.basis(d))).value();
            const double rhs = g.inner(nab[b], g.basis(d)).value() + g.inner(g.basis(b), nab[d]).value();
            out.residual = std::max(out.residual, std::abs(lhs - rhs));
            out.scale = std::max({out.scale, std::abs(lhs), std::abs(rhs)});
          }
      }
      return out;
    };
    m["prop2_vs_direct"] = [](PointContext& c, double) {
      const CurvatureTable& d = c.direct();
      const CurvatureTable& k = c.closed();
      const int m1 = c.geo().dim() + 1;
      PointValue out;
      for (int a = 0; a < m1; ++a)
        for (int b = 0; b < m1; ++b)
          for (int e = 0; e < m1; ++e) {
            out.residual = std::max(out.residual, max_abs_difference(d(a, b, e), k(a, b, e)));
            out.scale = std::max(out.scale, max_abs(k(a, b, e)));
          }
      return out;
    };
    m["prop3_trace"] = [](PointContext& c, double) {
      const AffineGeometry& g = c.geo();
      const HatRicci closed = g.ricci();
      const HatRicci traced = AffineGeometry::ricci_from_curvature(c.direct(), g.inverse_values(), g.metric_values());
      const double r = std::max({std::abs(closed.g1g1 - traced.g1g1), (closed.x_g1 - traced.x_g1).cwiseAbs().maxCoeff(),
                                 (closed.g1_x - traced.g1_x).cwiseAbs().maxCoeff(),
                                 (closed.xy - traced.xy).cwiseAbs().maxCoeff()});
      const double s = max_entry({closed.g1g1, closed.x_g1.cwiseAbs().maxCoeff(), closed.xy.cwiseAbs().maxCoeff()});
      return PointValue{r, s};
    };
    m["prop4_trace"] = [](PointContext& c, double) {
      const AffineGeometry& g = c.geo();
      const HatRicci ric = g.ricci();
      const double closed = g.scalar();
      const double traced = AffineGeometry::scalar_from_ricci(ric, g.inverse_values());
      PointValue out{std::abs(closed - traced), max_entry({closed, ric.g1g1, ric.xy.cwiseAbs().maxCoeff()})};
      out.value = closed - traced;
      return out;
    };
    m["bianchi"] = [](PointContext& c, double) {
      const AffineGeometry& g = c.geo();
      auto rng = c.rng("bianchi");
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      const int n = g.dim();
      Eigen::VectorXd x(n), y(n), z(n);
      for (int i = 0; i < n; ++i) {
        x[i] = u(rng);
        y[i] = u(rng);
        z[i] = u(rng);
      }
      const double r = std::abs(g.bianchi_omega_residual(x, y, z));
      return PointValue{r, max_entry({g.base().covariant_derivative(g.omega()).max_abs_value()})};
    };
    m["m1_M1_consistency"] = [](PointContext& c, double) {
      const AffineGeometry& g = c.geo();
      const auto& res = c.field_residuals();
      const Jet k = 0.5 * (g.base().scalar() - 2.0 * g.grad_theta_sq());
      const Tensor d = res.m1_small - res.m1_big + k * g.base().metric();
      return PointValue{d.max_abs_value(), c.field_scale()};
    };
    m["div_ric_omega"] = [](PointContext& c, double) {
      return PointValue{c.identities().div_ric_omega.max_abs_value(), c.field_scale()};
    };
    m["div_trff_g"] = [](PointContext& c, double) {
      return PointValue{c.identities().div_trff_g.max_abs_value(), c.field_scale()};
    };
    m["div_t_theta"] = [](PointContext& c, double) {
      return PointValue{c.identities().div_t_theta.max_abs_value(), c.field_scale()};
    };
    m["div_t_omega"] = [](PointContext& c, double) {
      PointValue out{c.identities().div_t_omega.max_abs_value(), c.field_scale()};
      out.hypothesis = c.identities().m2.max_abs_value();
      out.hypothesis_scale = c.field_scale();
      return out;
    };
    m["conservation"] = [](PointContext& c, double) {
      const Conservation& k = c.conservation();
      PointValue out{k.divergence.max_abs_value(), c.field_scale()};
      out.hypothesis = std::max(k.m2, k.m3);
      out.hypothesis_scale = c.field_scale();
      return out;
    };
    m["ricci"] = [](PointContext& c, double) {
      const LocalGeometry& b = c.geo().base();
      return PointValue{b.ricci().max_abs_value(), max_entry({b.riemann().max_abs_value()})};
    };
    m["scalar_curvature"] = [](PointContext& c, double t) {
      const LocalGeometry& b = c.geo().base();
      const double r = b.scalar().value();
      PointValue out{std::abs(r - t), max_entry({b.ricci().max_abs_value(), r, t})};
      out.value = r;
      return out;
    };
    m["hat_scalar"] = [](PointContext& c, double t) {
      const AffineGeometry& g = c.geo();
      const double r = g.scalar();
      PointValue out{std::abs(r - t), max_entry({g.base().scalar().value(), g.tr_ff_theta().value(),
                                                 g.laplacian_theta().value(), g.grad_theta_sq().value(), t})};
      out.value = r;
      return out;
    };
    m["M1"] = [](PointContext& c, double) {
      return PointValue{c.field_residuals().m1_big.max_abs_value(), c.field_scale()};
    };
    m["m1"] = [](PointContext& c, double) {
      return PointValue{c.field_residuals().m1_small.max_abs_value(), c.field_scale()};
    };
    m["M2"] = [](PointContext& c, double) {
      return PointValue{c.field_residuals().m2.max_abs_value(), c.field_scale()};
    };
    m["M2_equiv"] = [](PointContext& c, double) {
      return PointValue{c.field_residuals().m2_equiv.max_abs_value(), c.field_scale()};
    };
    m["M3"] = [](PointContext& c, double) {
      const double v = c.field_residuals().m3.value();
      PointValue out{std::abs(v), c.field_scale()};
      out.value = v;
      return out;
    };
    m["trace4"] = [](PointContext& c, double) {
      const auto& t4 = c.field_residuals().trace4;
      PointValue out;
      if (!t4) {
        out.applicable = false;
        return out;
      }
      out.residual = std::abs(t4->value());
      out.scale = c.field_scale();
      out.value = t4->value();
      return out;
    };
    return m;
  }();
  return table;
}

}  // namespace

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> registry = build_registry();
  return registry;
}

const CheckInfo& check_info(const std::string& name) {
  for (const auto& c : check_registry())
    if (c.name == name) return c;
  fail(ErrorKind::Validation, "unknown check '" + name + "'");
}

bool is_known_check(const std::string& name) {
  for (const auto& c : check_registry())
    if (c.name == name) return true;
  return false;
}

bool check_is_scalar(const std::string& name) { return is_known_check(name) && check_info(name).scalar; }
bool check_accepts_target(const std::string& name) { return is_known_check(name) && check_info(name).target; }

std::vector<std::string> default_checks() {
  std::vector<std::string> out;
  for (const auto& c : check_registry())
    if (c.universal) out.push_back(c.name);
  return out;
}

PointContext::PointContext(const AffineMetricSpec& spec, std::vector<double> point, int order, std::uint64_t seed,
                           std::size_t point_index)
    : point_(std::move(point)),
      geo_(AffineGeometry::at(spec, point_, order)),
      seed_(seed),
      index_(point_index) {}

std::mt19937_64 PointContext::rng(const std::string& check) const {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char ch : check) h = (h ^ ch) * 1099511628211ULL;
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

const CurvatureTable& PointContext::direct() {
  if (!direct_) direct_ = geo_.curvature_direct_basis();
  return *direct_;
}
const CurvatureTable& PointContext::closed() {
  if (!closed_) closed_ = geo_.curvature_closed_basis();
  return *closed_;
}
const FieldEquationResiduals& PointContext::field_residuals() {
  if (!residuals_) residuals_ = residuals(geo_);
  return *residuals_;
}
const DivergenceIdentities& PointContext::identities() {
  if (!identities_) identities_ = divergence_identities(geo_);
  return *identities_;
}
const Conservation& PointContext::conservation() {
  if (!conservation_) conservation_ = conservation_check(geo_);
  return *conservation_;
}

double PointContext::field_scale() {
  if (!field_scale_) {
    const AffineGeometry& g = geo_;
    const LocalGeometry& b = g.base();
    const double f2 = g.f_theta().max_abs_value();
    double s = max_entry({b.ricci().max_abs_value(), b.scalar().value(), g.ric_omega_theta().max_abs_value(), f2 * f2,
                          g.tr_ff_theta().value(), g.hessian_theta().max_abs_value(), g.grad_theta_sq().value(),
                          g.d_theta().max_abs_value() * g.d_theta().max_abs_value()});
    s = std::max(s, g.nabla_f_theta().max_abs_value());
    field_scale_ = s;
  }
  return *field_scale_;
}

PointValue evaluate_check(const std::string& name, PointContext& ctx, double target) {
  const auto& table = evaluators();
  auto it = table.find(name);
  if (it == table.end()) fail(ErrorKind::Validation, "unknown check '" + name + "'");
  return it->second(ctx, target);
}

}  // namespace affgeo
