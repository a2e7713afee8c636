#pragma once

// Truncated multivariate Taylor arithmetic ("jets").
//
// A Jet of order k over n variables carries a value together with every
// partial derivative of total order <= k at a fixed point. Arithmetic and the
// elementary functions propagate that data exactly (up to rounding), so any
// quantity computed from jets is itself differentiable to the remaining
// order. All geometry in this library is computed over Jets.
//
// Storage is the packed symmetric form: one Taylor coefficient
// c_a = (d^a f)/a! per multi-index a, graded by total degree. The coefficient
// ordering depends only on n, so the order-j prefix of an order-k jet is the
// order-j jet of the same function.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace affgeo {

inline constexpr int kMaxJetDim = 8;
inline constexpr int kMaxJetOrder = 4;

struct JetLayout;

class Jet {
 public:
  Jet() = default;

  static Jet constant(int dim, int order, double value);
  // The coordinate function x_index expanded about a point where it equals
  // `value`.
  static Jet variable(int dim, int order, int index, double value);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  bool empty() const noexcept { return coeffs_.empty(); }

  double value() const { return coeffs_.at(0); }
  // Mixed partial derivative d_{i1} d_{i2} ... f; indices may repeat and are
  // order-insensitive. An empty list returns the value.
  double partial(std::span<const int> indices) const;
  double partial(std::initializer_list<int> indices) const {
    return partial(std::span<const int>(indices.begin(), indices.size()));
  }

  // d f / d x_index as a jet of order `order() - 1`.
  Jet derivative(int index) const;
  Jet truncated(int order) const;

  std::span<const double> coefficients() const noexcept { return coeffs_; }

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(const Jet& other);
  Jet& operator/=(const Jet& other);
  Jet& operator+=(double c);
  Jet& operator-=(double c);
  Jet& operator*=(double c);
  Jet& operator/=(double c);

  // *this += c * a * b without a temporary; the result order is the minimum
  // of the three orders.
  Jet& add_product(const Jet& a, const Jet& b, double c = 1.0);

  friend Jet operator-(const Jet& a);
  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

 private:
  Jet(int dim, int order);
  const JetLayout& layout() const;

  friend Jet compose(const Jet& a, std::span<const double> taylor);
  friend Jet reciprocal(const Jet& a);

  int dim_ = 0;
  int order_ = 0;
  std::vector<double> coeffs_;
};

Jet operator+(const Jet& a, double c);
Jet operator+(double c, const Jet& a);
Jet operator-(const Jet& a, double c);
Jet operator-(double c, const Jet& a);
Jet operator*(const Jet& a, double c);
Jet operator*(double c, const Jet& a);
Jet operator/(const Jet& a, double c);
Jet operator/(double c, const Jet& a);

// f(a) given the Taylor coefficients f^(m)(a0)/m!, m = 0..a.order().
Jet compose(const Jet& a, std::span<const double> taylor);
Jet reciprocal(const Jet& a);

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
// Integer powers use repeated multiplication and accept any base (a zero
// base with a negative exponent is a domain error).
Jet pow(const Jet& a, int exponent);
// Real powers require a positive base.
Jet pow(const Jet& a, double exponent);
Jet pow(const Jet& a, const Jet& exponent);

// Largest absolute Taylor-coefficient difference; used by tests.
double max_abs_difference(const Jet& a, const Jet& b);

// Number of packed coefficients for (dim, order).
int jet_size(int dim, int order);

}  // namespace affgeo
