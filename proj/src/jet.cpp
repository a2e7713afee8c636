#include "affgeo/jet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <string>

#include "affgeo/errors.hpp"

namespace affgeo {

using Exponent = std::array<std::uint8_t, kMaxJetDim>;

struct JetLayout {
  int dim = 0;
  int order = 0;
  int size = 0;
  std::vector<Exponent> exps;
  std::vector<int> degree;
  // raise[a * dim + i] is the index of a + e_i, or -1 when deg(a) == order.
  std::vector<int> raise;
  std::vector<double> factorial;  // a! = prod_i a_i!
  // Truncated product table in CSR form: row a lists (b, index(a + b)) for
  // every b with deg(a) + deg(b) <= order.
  std::vector<int> prod_row;
  std::vector<std::pair<int, int>> prod;
};

namespace {

void enumerate_degree(int dim, int degree, int var, Exponent& current,
                      std::vector<Exponent>& out) {
  if (var == dim - 1) {
    current[var] = static_cast<std::uint8_t>(degree);
    out.push_back(current);
    current[var] = 0;
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[var] = static_cast<std::uint8_t>(e);
    enumerate_degree(dim, degree - e, var + 1, current, out);
  }
  current[var] = 0;
}

std::unique_ptr<JetLayout> build_layout(int dim, int order) {
  auto layout = std::make_unique<JetLayout>();
  layout->dim = dim;
  layout->order = order;
  for (int d = 0; d <= order; ++d) {
    Exponent zero{};
    enumerate_degree(dim, d, 0, zero, layout->exps);
  }
  layout->size = static_cast<int>(layout->exps.size());

  std::map<Exponent, int> index;
  for (int a = 0; a < layout->size; ++a) {
    index.emplace(layout->exps[a], a);
    int deg = 0;
    double fact = 1.0;
    for (int i = 0; i < dim; ++i) {
      deg += layout->exps[a][i];
      for (int m = 2; m <= layout->exps[a][i]; ++m) fact *= m;
    }
    layout->degree.push_back(deg);
    layout->factorial.push_back(fact);
  }

  layout->raise.assign(static_cast<std::size_t>(layout->size) * dim, -1);
  for (int a = 0; a < layout->size; ++a) {
    if (layout->degree[a] == order) continue;
    for (int i = 0; i < dim; ++i) {
      Exponent up = layout->exps[a];
      ++up[i];
      layout->raise[static_cast<std::size_t>(a) * dim + i] = index.at(up);
    }
  }

  layout->prod_row.push_back(0);
  for (int a = 0; a < layout->size; ++a) {
    for (int b = 0; b < layout->size; ++b) {
      if (layout->degree[a] + layout->degree[b] > order) continue;
      Exponent sum{};
      for (int i = 0; i < dim; ++i) sum[i] = layout->exps[a][i] + layout->exps[b][i];
      layout->prod.emplace_back(b, index.at(sum));
    }
    layout->prod_row.push_back(static_cast<int>(layout->prod.size()));
  }
  return layout;
}

struct LayoutTable {
  std::array<std::array<std::unique_ptr<JetLayout>, kMaxJetOrder + 1>, kMaxJetDim + 1> table;

  LayoutTable() {
    for (int n = 1; n <= kMaxJetDim; ++n)
      for (int k = 0; k <= kMaxJetOrder; ++k) table[n][k] = build_layout(n, k);
  }
};

const JetLayout& layout_for(int dim, int order) {
  static const LayoutTable layouts;
  if (dim < 1 || dim > kMaxJetDim)
    fail(ErrorKind::DimensionMismatch, "jet dimension " + std::to_string(dim) + " outside [1, 8]");
  if (order < 0 || order > kMaxJetOrder)
    fail(ErrorKind::Domain, "jet order " + std::to_string(order) + " outside [0, 4]");
  return *layouts.table[dim][order];
}

void check_pair(const Jet& a, const Jet& b) {
  if (a.empty() || b.empty()) fail(ErrorKind::Internal, "arithmetic on an empty jet");
  if (a.dim() != b.dim())
    fail(ErrorKind::DimensionMismatch, "jet dimensions differ: " + std::to_string(a.dim()) +
                                           " vs " + std::to_string(b.dim()));
}

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

}  // namespace

int jet_size(int dim, int order) { return layout_for(dim, order).size; }

Jet::Jet(int dim, int order) : dim_(dim), order_(order) {
  coeffs_.assign(static_cast<std::size_t>(layout_for(dim, order).size), 0.0);
}

const JetLayout& Jet::layout() const { return layout_for(dim_, order_); }

Jet Jet::constant(int dim, int order, double value) {
  Jet j(dim, order);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(int dim, int order, int index, double value) {
  if (index < 0 || index >= dim)
    fail(ErrorKind::DimensionMismatch, "variable index out of range");
  Jet j(dim, order);
  j.coeffs_[0] = value;
  if (order >= 1) j.coeffs_[1 + index] = 1.0;
  return j;
}

double Jet::partial(std::span<const int> indices) const {
  if (empty()) fail(ErrorKind::Internal, "partial of an empty jet");
  if (static_cast<int>(indices.size()) > order_)
    fail(ErrorKind::Domain, "requested derivative order exceeds jet order");
  const JetLayout& L = layout();
  int a = 0;
  for (int i : indices) {
    if (i < 0 || i >= dim_) fail(ErrorKind::DimensionMismatch, "partial index out of range");
    a = L.raise[static_cast<std::size_t>(a) * dim_ + i];
  }
  return coeffs_[a] * L.factorial[a];
}

Jet Jet::derivative(int index) const {
  if (empty()) fail(ErrorKind::Internal, "derivative of an empty jet");
  if (order_ == 0) fail(ErrorKind::Domain, "derivative of an order-0 jet");
  if (index < 0 || index >= dim_) fail(ErrorKind::DimensionMismatch, "derivative index out of range");
  const JetLayout& L = layout();
  Jet r(dim_, order_ - 1);
  for (int b = 0; b < static_cast<int>(r.coeffs_.size()); ++b) {
    const int up = L.raise[static_cast<std::size_t>(b) * dim_ + index];
    r.coeffs_[b] = (L.exps[b][index] + 1) * coeffs_[up];
  }
  return r;
}

Jet Jet::truncated(int order) const {
  if (order >= order_) return *this;
  Jet r(dim_, order);
  std::copy_n(coeffs_.begin(), r.coeffs_.size(), r.coeffs_.begin());
  return r;
}

Jet& Jet::operator+=(const Jet& other) {
  check_pair(*this, other);
  if (other.order_ < order_) *this = truncated(other.order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  check_pair(*this, other);
  if (other.order_ < order_) *this = truncated(other.order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& other) { return *this = *this * other; }
Jet& Jet::operator/=(const Jet& other) { return *this = *this / other; }

Jet& Jet::operator+=(double c) {
  coeffs_.at(0) += c;
  return *this;
}
Jet& Jet::operator-=(double c) {
  coeffs_.at(0) -= c;
  return *this;
}
Jet& Jet::operator*=(double c) {
  for (double& x : coeffs_) x *= c;
  return *this;
}
Jet& Jet::operator/=(double c) {
  if (c == 0.0) fail(ErrorKind::Domain, "division by zero");
  for (double& x : coeffs_) x /= c;
  return *this;
}

Jet operator-(const Jet& a) {
  Jet r = a;
  for (double& x : r.coeffs_) x = -x;
  return r;
}

Jet operator+(const Jet& a, const Jet& b) {
  if (b.order() < a.order()) return Jet(b) += a;
  return Jet(a) += b;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r = a;
  r -= b;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_pair(a, b);
  const int k = std::min(a.order_, b.order_);
  const JetLayout& L = layout_for(a.dim_, k);
  Jet r(a.dim_, k);
  for (int i = 0; i < L.size; ++i) {
    const double ai = a.coeffs_[i];
    if (ai == 0.0) continue;
    for (int p = L.prod_row[i]; p < L.prod_row[i + 1]; ++p)
      r.coeffs_[L.prod[p].second] += ai * b.coeffs_[L.prod[p].first];
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet& Jet::add_product(const Jet& a, const Jet& b, double c) {
  check_pair(a, b);
  check_pair(*this, a);
  const int k = std::min({order_, a.order_, b.order_});
  if (k < order_) *this = truncated(k);
  const JetLayout& L = layout_for(dim_, k);
  for (int i = 0; i < L.size; ++i) {
    const double ai = c * a.coeffs_[i];
    if (ai == 0.0) continue;
    for (int p = L.prod_row[i]; p < L.prod_row[i + 1]; ++p)
      coeffs_[L.prod[p].second] += ai * b.coeffs_[L.prod[p].first];
  }
  return *this;
}

Jet operator+(const Jet& a, double c) { return Jet(a) += c; }
Jet operator+(double c, const Jet& a) { return Jet(a) += c; }
Jet operator-(const Jet& a, double c) { return Jet(a) -= c; }
Jet operator-(double c, const Jet& a) { return (-a) += c; }
Jet operator*(const Jet& a, double c) { return Jet(a) *= c; }
Jet operator*(double c, const Jet& a) { return Jet(a) *= c; }
Jet operator/(const Jet& a, double c) { return Jet(a) /= c; }
Jet operator/(double c, const Jet& a) { return reciprocal(a) *= c; }

Jet compose(const Jet& a, std::span<const double> taylor) {
  if (a.empty()) fail(ErrorKind::Internal, "compose on an empty jet");
  const int k = a.order_;
  Jet result = Jet::constant(a.dim_, k, taylor[0]);
  if (k == 0) return result;
  Jet nil = a;
  nil.coeffs_[0] = 0.0;
  Jet power = nil;
  for (int m = 1; m <= k; ++m) {
    const double t = taylor[m];
    if (t != 0.0)
      for (std::size_t i = 0; i < result.coeffs_.size(); ++i) result.coeffs_[i] += t * power.coeffs_[i];
    if (m < k) power = power * nil;
  }
  return result;
}

Jet reciprocal(const Jet& a) {
  const double a0 = a.value();
  if (a0 == 0.0) fail(ErrorKind::Domain, "division by zero");
  std::array<double, kMaxJetOrder + 1> t{};
  double inv = 1.0 / a0;
  double p = inv;
  for (int m = 0; m <= a.order(); ++m) {
    t[m] = (m % 2 == 0 ? p : -p);
    p *= inv;
  }
  return compose(a, t);
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cycle[4] = {s, c, -s, -c};
  std::array<double, kMaxJetOrder + 1> t{};
  for (int m = 0; m <= a.order(); ++m) t[m] = cycle[m % 4] / factorial(m);
  return compose(a, t);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cycle[4] = {c, -s, -c, s};
  std::array<double, kMaxJetOrder + 1> t{};
  for (int m = 0; m <= a.order(); ++m) t[m] = cycle[m % 4] / factorial(m);
  return compose(a, t);
}

Jet tan(const Jet& a) {
  if (std::cos(a.value()) == 0.0) fail(ErrorKind::Domain, "tan at a pole");
  return sin(a) / cos(a);
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  std::array<double, kMaxJetOrder + 1> t{};
  for (int m = 0; m <= a.order(); ++m) t[m] = e / factorial(m);
  return compose(a, t);
}

Jet log(const Jet& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) fail(ErrorKind::Domain, "log of nonpositive value");
  std::array<double, kMaxJetOrder + 1> t{};
  t[0] = std::log(a0);
  double p = 1.0;
  for (int m = 1; m <= a.order(); ++m) {
    p /= a0;
    t[m] = (m % 2 == 1 ? 1.0 : -1.0) * p / m;
  }
  return compose(a, t);
}

namespace {

Jet real_power(const Jet& a, double r, const char* what) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) fail(ErrorKind::Domain, std::string(what) + " of nonpositive value");
  std::array<double, kMaxJetOrder + 1> t{};
  double binom = 1.0;
  for (int m = 0; m <= a.order(); ++m) {
    t[m] = binom * std::pow(a0, r - m);
    binom *= (r - m) / (m + 1);
  }
  return compose(a, t);
}

}  // namespace

Jet sqrt(const Jet& a) { return real_power(a, 0.5, "sqrt"); }

Jet sinh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  std::array<double, kMaxJetOrder + 1> t{};
  for (int m = 0; m <= a.order(); ++m) t[m] = (m % 2 == 0 ? s : c) / factorial(m);
  return compose(a, t);
}

Jet cosh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  std::array<double, kMaxJetOrder + 1> t{};
  for (int m = 0; m <= a.order(); ++m) t[m] = (m % 2 == 0 ? c : s) / factorial(m);
  return compose(a, t);
}

Jet pow(const Jet& a, int exponent) {
  if (exponent < 0) return reciprocal(pow(a, -exponent));
  Jet result = Jet::constant(a.dim(), a.order(), 1.0);
  Jet base = a;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e != 0) base = base * base;
  }
  return result;
}

Jet pow(const Jet& a, double exponent) {
  if (std::nearbyint(exponent) == exponent && std::abs(exponent) <= 1 << 20)
    return pow(a, static_cast<int>(exponent));
  return real_power(a, exponent, "pow");
}

Jet pow(const Jet& a, const Jet& exponent) {
  const auto c = exponent.coefficients();
  const bool constant = std::all_of(c.begin() + 1, c.end(), [](double x) { return x == 0.0; });
  if (constant) return pow(a, exponent.value());
  if (!(a.value() > 0.0)) fail(ErrorKind::Domain, "pow of nonpositive base with variable exponent");
  return exp(exponent * log(a));
}

double max_abs_difference(const Jet& a, const Jet& b) {
  check_pair(a, b);
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  const std::size_t n = std::min(ca.size(), cb.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(ca[i] - cb[i]));
  return worst;
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularBilinearPart: return "SingularBilinearPart";
    case ErrorKind::DegenerateLambda: return "DegenerateLambda";
    case ErrorKind::NotTwoAffine: return "NotTwoAffine";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::UnsupportedRank: return "UnsupportedRank";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::DegenerateFamily: return "DegenerateFamily";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Internal: return "InternalError";
  }
  return "Error";
}

}  // namespace affgeo
