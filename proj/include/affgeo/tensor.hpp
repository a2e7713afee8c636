#pragma once

// Dense tensors at a point whose components are jets.
//
// Components are stored row-major over slot indices. Slot variance is carried
// explicitly so covariant derivatives and contractions know where Christoffel
// terms and metric factors go. For (1,1) operators the convention is
// T(up a, down b), i.e. T(X)^a = T^a_b X^b.

#include <initializer_list>
#include <span>
#include <vector>

#include "affgeo/jet.hpp"

namespace affgeo {

enum class Slot : char { Up, Down };

class Tensor {
 public:
  Tensor() = default;
  // Every component initialized to the zero jet of (jet_dim, order).
  Tensor(int dim, std::vector<Slot> slots, int jet_dim, int order);
  static Tensor scalar(const Jet& value);

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return static_cast<int>(slots_.size()); }
  const std::vector<Slot>& slots() const noexcept { return slots_; }
  std::size_t size() const noexcept { return data_.size(); }
  // Smallest jet order over the components.
  int order() const;

  Jet& operator()() { return data_[0]; }
  const Jet& operator()() const { return data_[0]; }
  Jet& operator()(int i) { return data_[i]; }
  const Jet& operator()(int i) const { return data_[i]; }
  Jet& operator()(int i, int j) { return data_[i * dim_ + j]; }
  const Jet& operator()(int i, int j) const { return data_[i * dim_ + j]; }
  Jet& operator()(int i, int j, int k) { return data_[(i * dim_ + j) * dim_ + k]; }
  const Jet& operator()(int i, int j, int k) const { return data_[(i * dim_ + j) * dim_ + k]; }
  Jet& operator()(int i, int j, int k, int l) { return data_[((i * dim_ + j) * dim_ + k) * dim_ + l]; }
  const Jet& operator()(int i, int j, int k, int l) const {
    return data_[((i * dim_ + j) * dim_ + k) * dim_ + l];
  }

  Jet& at_flat(std::size_t k) { return data_[k]; }
  const Jet& at_flat(std::size_t k) const { return data_[k]; }
  std::span<Jet> components() { return data_; }
  std::span<const Jet> components() const { return data_; }

  // Component values as doubles, row-major.
  std::vector<double> values() const;
  double max_abs_value() const;

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double c);
  Tensor& operator*=(const Jet& c);

 private:
  int dim_ = 0;
  std::vector<Slot> slots_;
  std::vector<Jet> data_;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(Tensor a, double c);
Tensor operator*(double c, Tensor a);
Tensor operator*(const Jet& c, Tensor a);

// Tensor product with slots concatenated.
Tensor outer(const Tensor& a, const Tensor& b);
// Contract slot a with slot b; one must be Up and the other Down.
Tensor contract(const Tensor& t, int a, int b);
// Componentwise symmetric part of a rank-2 tensor.
Tensor symmetrize(const Tensor& t);
// Largest |T - T^T| over a rank-2 tensor's values (or |T + T^T| when
// `anti`).
double symmetry_defect(const Tensor& t, bool anti = false);
// Largest componentwise value difference.
double max_abs_difference(const Tensor& a, const Tensor& b);

}  // namespace affgeo
