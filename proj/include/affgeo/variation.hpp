#pragma once

// First variations of the affine metric under the family
//   g(t) = g + t s,  θ(t) = θ + t h,  A♭(t) = A♭ + Γ_t,  Γ_t = -t e^{-2th} δ,
// checked pointwise against central differences in t, and the integrated
// Euler–Lagrange pairing on a periodic box.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "affgeo/algebroid.hpp"

namespace affgeo {

struct DeformationFamily {
  AffineMetricSpec base;
  MetricField s;                   // symmetric (0,2)
  std::vector<Expression> delta;   // 1-form
  Expression h;
  double t0 = 1e-4;

  void validate() const;
  // The deformed affine metric at parameter t; throws DegenerateFamily when
  // g + t s is singular at p.
  AffineGeometry at(std::span<const double> p, double t, int order) const;
  // Largest T such that g + t s stays invertible at p for |t| < T.
  double t_max(std::span<const double> p) const;
};

enum class VariationQuantity { VolumeDensity, LaplacianTheta, GradThetaSq, OmegaPrime, TrFF };

const char* to_string(VariationQuantity q);
VariationQuantity parse_variation_quantity(const std::string& name);
std::vector<VariationQuantity> all_variation_quantities();

struct PointwiseVariation {
  std::vector<double> analytic;  // one entry, or n*n for omega_prime
  std::vector<double> numeric;
  double abs_err = 0.0;
  // abs_err over the summed magnitude of the analytic terms (abs_err itself
  // when every term vanishes).
  double rel_err = 0.0;
  double scale = 0.0;
};

PointwiseVariation first_variation_pointwise(const DeformationFamily& fam, std::span<const double> p,
                                             VariationQuantity which);

struct PeriodicBox {
  std::vector<double> origin;
  std::vector<double> periods;
  int resolution = 16;

  int dim() const { return static_cast<int>(periods.size()); }
  std::size_t point_count() const;
  std::vector<double> point(std::size_t index) const;
  double cell_volume() const;
  void validate() const;
};

// Equal-weight (periodic trapezoid) quadrature with pairwise summation.
double integrate_periodic(const PeriodicBox& box, const std::function<double(std::span<const double>)>& f,
                          int threads = 1);

// Throws Validation when any expression differs by more than 1e-9 across a
// period at seeded probe points.
void check_periodic(const PeriodicBox& box, const std::vector<const Expression*>& fields);
std::vector<const Expression*> spec_fields(const AffineMetricSpec& spec);
std::vector<const Expression*> family_fields(const DeformationFamily& fam);

// ∫ R̂ √|det g| over the box.
double action_integral(const AffineMetricSpec& spec, const PeriodicBox& box, int threads = 1);
double action_integral(const DeformationFamily& fam, double t, const PeriodicBox& box, int threads = 1);

// Euler–Lagrange density paired with (s, δ, h), times √|det g|.
double euler_lagrange_density(const DeformationFamily& fam, std::span<const double> p);

struct ActionVariation {
  double numeric = 0.0;
  double analytic = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
};

ActionVariation action_variation(const DeformationFamily& fam, const PeriodicBox& box, int threads = 1);

}  // namespace affgeo
