#include "affgeo/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "affgeo/errors.hpp"

namespace affgeo {

namespace {

std::size_t power(int n, int r) {
  std::size_t s = 1;
  for (int i = 0; i < r; ++i) s *= static_cast<std::size_t>(n);
  return s;
}

void require_same_shape(const Tensor& a, const Tensor& b) {
  if (a.dim() != b.dim() || a.slots() != b.slots())
    fail(ErrorKind::RankMismatch, "tensor shapes differ");
}

// Row-major multi-index decomposition of a flat position.
void unflatten(std::size_t k, int n, int r, int* idx) {
  for (int s = r - 1; s >= 0; --s) {
    idx[s] = static_cast<int>(k % n);
    k /= n;
  }
}

std::size_t flatten(const int* idx, int n, int r) {
  std::size_t k = 0;
  for (int s = 0; s < r; ++s) k = k * n + idx[s];
  return k;
}

}  // namespace

Tensor::Tensor(int dim, std::vector<Slot> slots, int jet_dim, int order)
    : dim_(dim), slots_(std::move(slots)) {
  data_.assign(power(dim_, rank()), Jet::constant(jet_dim, order, 0.0));
}

Tensor Tensor::scalar(const Jet& value) {
  Tensor t;
  t.dim_ = value.dim();
  t.data_.push_back(value);
  return t;
}

int Tensor::order() const {
  int k = kMaxJetOrder;
  for (const Jet& j : data_) k = std::min(k, j.order());
  return k;
}

std::vector<double> Tensor::values() const {
  std::vector<double> v;
  v.reserve(data_.size());
  for (const Jet& j : data_) v.push_back(j.value());
  return v;
}

double Tensor::max_abs_value() const {
  double m = 0.0;
  for (const Jet& j : data_) m = std::max(m, std::abs(j.value()));
  return m;
}

Tensor& Tensor::operator+=(const Tensor& other) {
  require_same_shape(*this, other);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
  require_same_shape(*this, other);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Tensor& Tensor::operator*=(double c) {
  for (Jet& j : data_) j *= c;
  return *this;
}

Tensor& Tensor::operator*=(const Jet& c) {
  for (Jet& j : data_) j *= c;
  return *this;
}

Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
Tensor operator*(Tensor a, double c) { return a *= c; }
Tensor operator*(double c, Tensor a) { return a *= c; }
Tensor operator*(const Jet& c, Tensor a) { return a *= c; }

Tensor outer(const Tensor& a, const Tensor& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "outer product of different dimensions");
  std::vector<Slot> slots = a.slots();
  slots.insert(slots.end(), b.slots().begin(), b.slots().end());
  const Jet& j0 = a.at_flat(0);
  Tensor r(a.dim(), slots, j0.dim(), std::min(a.order(), b.order()));
  std::size_t k = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r.at_flat(k++) = a.at_flat(i) * b.at_flat(j);
  return r;
}

Tensor contract(const Tensor& t, int a, int b) {
  const int r = t.rank();
  if (a == b || a < 0 || b < 0 || a >= r || b >= r)
    fail(ErrorKind::RankMismatch, "invalid contraction slots");
  if (t.slots()[a] == t.slots()[b]) fail(ErrorKind::RankMismatch, "contraction needs one upper and one lower slot");
  std::vector<Slot> slots;
  for (int s = 0; s < r; ++s)
    if (s != a && s != b) slots.push_back(t.slots()[s]);
  const int n = t.dim();
  Tensor out(n, slots, t.at_flat(0).dim(), t.order());
  int full[8];
  int rest[8];
  for (std::size_t k = 0; k < out.size(); ++k) {
    unflatten(k, n, r - 2, rest);
    for (int s = 0, q = 0; s < r; ++s)
      if (s != a && s != b) full[s] = rest[q++];
    Jet acc = Jet::constant(t.at_flat(0).dim(), t.order(), 0.0);
    for (int i = 0; i < n; ++i) {
      full[a] = full[b] = i;
      acc += t.at_flat(flatten(full, n, r));
    }
    out.at_flat(k) = std::move(acc);
  }
  return out;
}

Tensor symmetrize(const Tensor& t) {
  if (t.rank() != 2) fail(ErrorKind::UnsupportedRank, "symmetrize needs rank 2");
  Tensor s = t;
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) s(i, j) = 0.5 * (t(i, j) + t(j, i));
  return s;
}

double symmetry_defect(const Tensor& t, bool anti) {
  if (t.rank() != 2) fail(ErrorKind::UnsupportedRank, "symmetry check needs rank 2");
  double m = 0.0;
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) {
      const double d = anti ? t(i, j).value() + t(j, i).value() : t(i, j).value() - t(j, i).value();
      m = std::max(m, std::abs(d));
    }
  return m;
}

double max_abs_difference(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b);
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    m = std::max(m, std::abs(a.at_flat(k).value() - b.at_flat(k).value()));
  return m;
}

}  // namespace affgeo
