#include "affgeo/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "affgeo/errors.hpp"

namespace affgeo {

namespace {

constexpr double kSingular = 1e-12;

std::size_t flatten(const int* idx, int n, int r) {
  std::size_t k = 0;
  for (int s = 0; s < r; ++s) k = k * n + idx[s];
  return k;
}

void unflatten(std::size_t k, int n, int r, int* idx) {
  for (int s = r - 1; s >= 0; --s) {
    idx[s] = static_cast<int>(k % n);
    k /= n;
  }
}

// Gauss-Jordan inverse with partial pivoting on values; also returns det.
std::pair<Tensor, Jet> invert(const Tensor& g, int jet_dim) {
  const int n = g.dim();
  const int k = g.order();
  double scale = std::max(g.max_abs_value(), 1e-300);
  std::vector<Jet> a(g.components().begin(), g.components().end());
  std::vector<Jet> inv(static_cast<std::size_t>(n) * n, Jet::constant(jet_dim, k, 0.0));
  for (int i = 0; i < n; ++i) inv[i * n + i] = Jet::constant(jet_dim, k, 1.0);
  Jet det = Jet::constant(jet_dim, k, 1.0);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c].value()) > std::abs(a[piv * n + c].value())) piv = r;
    if (!(std::abs(a[piv * n + c].value()) > kSingular * scale))
      fail(ErrorKind::SingularMetric, "metric is singular at the evaluation point");
    if (piv != c) {
      for (int j = 0; j < n; ++j) {
        std::swap(a[c * n + j], a[piv * n + j]);
        std::swap(inv[c * n + j], inv[piv * n + j]);
      }
      det = -det;
    }
    det *= a[c * n + c];
    const Jet p = reciprocal(a[c * n + c]);
    for (int j = 0; j < n; ++j) {
      a[c * n + j] *= p;
      inv[c * n + j] *= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const Jet f = a[r * n + c];
      for (int j = 0; j < n; ++j) {
        a[r * n + j].add_product(f, a[c * n + j], -1.0);
        inv[r * n + j].add_product(f, inv[c * n + j], -1.0);
      }
    }
  }
  Tensor out(n, {Slot::Up, Slot::Up}, jet_dim, k);
  for (int i = 0; i < n * n; ++i) out.at_flat(i) = inv[i];
  // symmetrize away rounding
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Jet s = 0.5 * (out(i, j) + out(j, i));
      out(i, j) = s;
      out(j, i) = std::move(s);
    }
  return {std::move(out), std::move(det)};
}

}  // namespace

void Chart::validate() const {
  const int n = dim();
  if (n < 2) fail(ErrorKind::Validation, "chart dimension must be at least 2");
  if (n > kMaxJetDim) fail(ErrorKind::Validation, "chart dimension above " + std::to_string(kMaxJetDim));
  std::set<std::string> seen(coords.begin(), coords.end());
  if (static_cast<int>(seen.size()) != n) fail(ErrorKind::Validation, "coordinate names must be distinct");
  if (static_cast<int>(signature.size()) != n) fail(ErrorKind::Validation, "signature length differs from dimension");
  for (int s : signature)
    if (s != 1 && s != -1) fail(ErrorKind::Validation, "signature entries must be +1 or -1");
  if (static_cast<int>(region.size()) != n) fail(ErrorKind::Validation, "region length differs from dimension");
  for (const auto& [lo, hi] : region)
    if (!(lo < hi)) fail(ErrorKind::Validation, "empty sampling interval");
}

int Chart::negative_directions() const {
  return static_cast<int>(std::count(signature.begin(), signature.end(), -1));
}

MetricField::MetricField(std::vector<Expression> components, int dim)
    : dim_(dim), comps_(std::move(components)) {
  if (static_cast<int>(comps_.size()) != dim * dim)
    fail(ErrorKind::DimensionMismatch, "metric needs n*n components");
}

MetricField MetricField::from_lower(const std::vector<std::vector<Expression>>& lower) {
  const int n = static_cast<int>(lower.size());
  std::vector<Expression> c(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(lower[i].size()) != i + 1)
      fail(ErrorKind::DimensionMismatch, "lower-triangular metric row " + std::to_string(i) + " needs " +
                                             std::to_string(i + 1) + " entries");
    for (int j = 0; j <= i; ++j) c[i * n + j] = c[j * n + i] = lower[i][j];
  }
  return MetricField(std::move(c), n);
}

Tensor MetricField::jets(std::span<const double> point, int order) const {
  Tensor g(dim_, {Slot::Down, Slot::Down}, dim_, order);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) {
      Jet v = eval_jet(component(i, j), point, order);
      g(j, i) = v;
      g(i, j) = std::move(v);
    }
  return g;
}

Tensor field_jets(const std::vector<Expression>& comps, Slot slot, std::span<const double> point, int order) {
  const int n = static_cast<int>(comps.size());
  Tensor t(n, {slot}, n, order);
  for (int i = 0; i < n; ++i) t(i) = eval_jet(comps[i], point, order);
  return t;
}

void check_signature(const Tensor& metric, int negatives) {
  const int n = metric.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = 0.5 * (metric(i, j).value() + metric(j, i).value());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double scale = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
  int neg = 0;
  for (int i = 0; i < n; ++i) {
    const double e = es.eigenvalues()[i];
    if (std::abs(e) <= kSingular * scale) fail(ErrorKind::SingularMetric, "metric is degenerate");
    if (e < 0) ++neg;
  }
  if (neg != negatives)
    fail(ErrorKind::Validation, "metric has " + std::to_string(neg) + " negative directions, signature declares " +
                                    std::to_string(negatives));
}

LocalGeometry::LocalGeometry(Tensor metric) : g_(std::move(metric)) {
  if (g_.rank() != 2 || g_.slots()[0] != Slot::Down || g_.slots()[1] != Slot::Down)
    fail(ErrorKind::RankMismatch, "metric must be a (0,2) tensor");
  n_ = g_.dim();
  jet_dim_ = g_(0, 0).dim();
  order_ = g_.order();
  auto [inv, det] = invert(g_, jet_dim_);
  ginv_ = std::move(inv);
  det_ = std::move(det);

  if (order_ >= 1) {
    // dg(l, i, j) = ∂_l g_ij
    const Tensor dg = partial_derivative(g_);
    gamma_ = Tensor(n_, {Slot::Up, Slot::Down, Slot::Down}, jet_dim_, order_ - 1);
    std::vector<Jet> lowered(static_cast<std::size_t>(n_) * n_ * n_, zero(order_ - 1));
    for (int l = 0; l < n_; ++l)
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j)
          lowered[(l * n_ + i) * n_ + j] = 0.5 * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) {
          Jet acc = zero(order_ - 1);
          for (int l = 0; l < n_; ++l) acc.add_product(ginv_(k, l), lowered[(l * n_ + i) * n_ + j]);
          gamma_(k, j, i) = acc;
          gamma_(k, i, j) = std::move(acc);
        }
  }
  if (order_ >= 2) {
    const Tensor dgamma = partial_derivative(gamma_);  // dgamma(i, l, j, k) = ∂_i Γ^l_jk
    riemann_ = Tensor(n_, {Slot::Up, Slot::Down, Slot::Down, Slot::Down}, jet_dim_, order_ - 2);
    for (int l = 0; l < n_; ++l)
      for (int k = 0; k < n_; ++k)
        for (int i = 0; i < n_; ++i)
          for (int j = i + 1; j < n_; ++j) {
            Jet r = dgamma(i, l, j, k) - dgamma(j, l, i, k);
            for (int m = 0; m < n_; ++m) {
              r.add_product(gamma_(l, i, m), gamma_(m, j, k));
              r.add_product(gamma_(l, j, m), gamma_(m, i, k), -1.0);
            }
            riemann_(l, k, j, i) = -r;
            riemann_(l, k, i, j) = std::move(r);
          }
    ricci_ = Tensor(n_, {Slot::Down, Slot::Down}, jet_dim_, order_ - 2);
    for (int k = 0; k < n_; ++k)
      for (int j = 0; j < n_; ++j) {
        Jet acc = zero(order_ - 2);
        for (int i = 0; i < n_; ++i) acc += riemann_(i, k, i, j);
        ricci_(k, j) = std::move(acc);
      }
    scalar_ = zero(order_ - 2);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) scalar_.add_product(ginv_(i, j), ricci_(i, j));
  }
}

void LocalGeometry::require_order(int k, const char* what) const {
  if (order_ < k)
    fail(ErrorKind::Domain, std::string(what) + " needs metric jets of order >= " + std::to_string(k));
}

const Tensor& LocalGeometry::christoffel() const {
  require_order(1, "Christoffel symbols");
  return gamma_;
}
const Tensor& LocalGeometry::riemann() const {
  require_order(2, "curvature");
  return riemann_;
}
const Tensor& LocalGeometry::ricci() const {
  require_order(2, "curvature");
  return ricci_;
}
const Jet& LocalGeometry::scalar() const {
  require_order(2, "curvature");
  return scalar_;
}

Tensor LocalGeometry::raise(const Tensor& t, int slot) const {
  if (t.slots().at(slot) != Slot::Down) fail(ErrorKind::RankMismatch, "raising an upper slot");
  std::vector<Slot> slots = t.slots();
  slots[slot] = Slot::Up;
  const int r = t.rank();
  Tensor out(n_, slots, jet_dim_, std::min(t.order(), order_));
  int idx[8];
  for (std::size_t k = 0; k < out.size(); ++k) {
    unflatten(k, n_, r, idx);
    const int a = idx[slot];
    Jet acc = zero(out.order());
    for (int b = 0; b < n_; ++b) {
      idx[slot] = b;
      acc.add_product(ginv_(a, b), t.at_flat(flatten(idx, n_, r)));
    }
    out.at_flat(k) = std::move(acc);
  }
  return out;
}

Tensor LocalGeometry::lower(const Tensor& t, int slot) const {
  if (t.slots().at(slot) != Slot::Up) fail(ErrorKind::RankMismatch, "lowering a lower slot");
  std::vector<Slot> slots = t.slots();
  slots[slot] = Slot::Down;
  const int r = t.rank();
  Tensor out(n_, slots, jet_dim_, std::min(t.order(), order_));
  int idx[8];
  for (std::size_t k = 0; k < out.size(); ++k) {
    unflatten(k, n_, r, idx);
    const int a = idx[slot];
    Jet acc = zero(out.order());
    for (int b = 0; b < n_; ++b) {
      idx[slot] = b;
      acc.add_product(g_(a, b), t.at_flat(flatten(idx, n_, r)));
    }
    out.at_flat(k) = std::move(acc);
  }
  return out;
}

Tensor LocalGeometry::partial_derivative(const Tensor& t) const {
  std::vector<Slot> slots{Slot::Down};
  slots.insert(slots.end(), t.slots().begin(), t.slots().end());
  const int k = t.order();
  if (k < 1) fail(ErrorKind::Domain, "derivative of an order-0 field");
  Tensor out(n_, slots, jet_dim_, k - 1);
  const std::size_t m = t.size();
  for (int i = 0; i < n_; ++i)
    for (std::size_t c = 0; c < m; ++c) out.at_flat(i * m + c) = t.at_flat(c).derivative(i);
  return out;
}

Tensor LocalGeometry::covariant_derivative(const Tensor& t) const {
  require_order(1, "covariant derivative");
  Tensor out = partial_derivative(t);
  const int r = t.rank();
  const std::size_t m = t.size();
  int idx[8];
  for (int i = 0; i < n_; ++i)
    for (std::size_t c = 0; c < m; ++c) {
      unflatten(c, n_, r, idx);
      Jet& acc = out.at_flat(i * m + c);
      for (int s = 0; s < r; ++s) {
        const int a = idx[s];
        for (int q = 0; q < n_; ++q) {
          idx[s] = q;
          const Jet& tq = t.at_flat(flatten(idx, n_, r));
          if (t.slots()[s] == Slot::Up)
            acc.add_product(gamma_(a, i, q), tq);
          else
            acc.add_product(gamma_(q, i, a), tq, -1.0);
        }
        idx[s] = a;
      }
    }
  return out;
}

ScalarCalculus scalar_calculus(const LocalGeometry& geo, const Jet& f) {
  ScalarCalculus sc;
  sc.d = geo.partial_derivative(Tensor::scalar(f));
  sc.grad = geo.raise(sc.d, 0);
  sc.hessian = geo.covariant_derivative(sc.d);
  const int n = geo.dim();
  sc.laplacian = geo.zero(sc.hessian.order());
  sc.grad_sq = geo.zero(sc.d.order());
  for (int i = 0; i < n; ++i) {
    sc.grad_sq.add_product(sc.grad(i), sc.d(i));
    for (int j = 0; j < n; ++j) sc.laplacian.add_product(geo.inverse()(i, j), sc.hessian(i, j));
  }
  return sc;
}

Tensor divergence(const LocalGeometry& geo, const Tensor& t) {
  const int r = t.rank();
  if (r < 1 || r > 2) fail(ErrorKind::UnsupportedRank, "divergence supports vectors, 1-forms and rank-2 tensors");
  // (1,1) operators contract the argument slot
  const bool op = r == 2 && t.slots()[0] == Slot::Up && t.slots()[1] == Slot::Down;
  if (r == 2 && !op && t.slots()[0] == Slot::Up)
    fail(ErrorKind::UnsupportedRank, "divergence of a tensor with a leading upper slot");
  Tensor nabla = geo.covariant_derivative(t);  // slot 0 is the derivative index
  const int target = op ? 2 : 1;
  if (nabla.slots()[target] == Slot::Down) nabla = geo.raise(nabla, target);
  return contract(nabla, 0, target);
}

Tensor exterior_derivative(const Tensor& form) {
  const int k = form.rank();
  if (k > 2) fail(ErrorKind::UnsupportedRank, "exterior derivative supports 0-, 1- and 2-forms");
  for (Slot s : form.slots())
    if (s != Slot::Down) fail(ErrorKind::RankMismatch, "exterior derivative of a non-form");
  const int n = form.dim();
  const int jd = form.at_flat(0).dim();
  const int ord = form.order() - 1;
  if (ord < 0) fail(ErrorKind::Domain, "exterior derivative of an order-0 field");
  std::vector<Slot> slots(k + 1, Slot::Down);
  Tensor out(n, slots, jd, ord);
  if (k == 0) {
    for (int i = 0; i < n; ++i) out(i) = form().derivative(i);
  } else if (k == 1) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) = form(j).derivative(i) - form(i).derivative(j);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          out(i, j, l) = form(j, l).derivative(i) + form(l, i).derivative(j) + form(i, j).derivative(l);
  }
  return out;
}

Jet tensor_inner(const LocalGeometry& geo, const Tensor& t, const Tensor& s) {
  if (t.dim() != s.dim() || t.slots() != s.slots()) fail(ErrorKind::RankMismatch, "tensor_inner of different shapes");
  Tensor dual = s;
  for (int q = 0; q < s.rank(); ++q) dual = s.slots()[q] == Slot::Down ? geo.raise(dual, q) : geo.lower(dual, q);
  Jet acc = geo.zero(std::min(t.order(), dual.order()));
  for (std::size_t c = 0; c < t.size(); ++c) acc.add_product(t.at_flat(c), dual.at_flat(c));
  return acc;
}

Jet trace(const Tensor& op) {
  if (op.rank() != 2 || op.slots()[0] != Slot::Up || op.slots()[1] != Slot::Down)
    fail(ErrorKind::RankMismatch, "trace needs a (1,1) operator");
  return contract(op, 0, 1)();
}

Jet trace_product(const Tensor& t, const Tensor& s) {
  for (const Tensor* x : {&t, &s})
    if (x->rank() != 2 || x->slots()[0] != Slot::Up || x->slots()[1] != Slot::Down)
      fail(ErrorKind::RankMismatch, "trace_product needs (1,1) operators");
  const int n = t.dim();
  Jet acc = Jet::constant(t(0, 0).dim(), std::min(t.order(), s.order()), 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) acc.add_product(t(a, b), s(b, a));
  return acc;
}

Tensor apply(const Tensor& op, const Tensor& vec) {
  if (op.rank() != 2 || vec.rank() != 1 || op.slots()[1] != Slot::Down || vec.slots()[0] != Slot::Up)
    fail(ErrorKind::RankMismatch, "apply needs a (1,1) operator and a vector");
  const int n = op.dim();
  Tensor out(n, {op.slots()[0]}, op(0, 0).dim(), std::min(op.order(), vec.order()));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out(a).add_product(op(a, b), vec(b));
  return out;
}

Jet inner_vectors(const LocalGeometry& geo, const Tensor& x, const Tensor& y) {
  const int n = geo.dim();
  Jet acc = geo.zero(std::min({x.order(), y.order(), geo.order()}));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Jet xy = x(a) * y(b);
      acc.add_product(geo.metric()(a, b), xy);
    }
  return acc;
}

Tensor operator_from_form(const LocalGeometry& geo, const Tensor& form) {
  if (form.rank() != 2 || form.slots()[0] != Slot::Down || form.slots()[1] != Slot::Down)
    fail(ErrorKind::RankMismatch, "operator_from_form needs a (0,2) tensor");
  const int n = geo.dim();
  Tensor f(n, {Slot::Up, Slot::Down}, geo.jet_dim(), std::min(form.order(), geo.order()));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k) f(a, b).add_product(geo.inverse()(a, k), form(b, k));
  return f;
}

}  // namespace affgeo
