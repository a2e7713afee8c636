#pragma once

// Named per-point checks. Each evaluation yields the largest absolute
// residual entry and the scale it is judged against:
//   scale = max(1, largest absolute entry of the tensors entering the identity).

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "affgeo/algebroid.hpp"
#include "affgeo/field_eq.hpp"

namespace affgeo {

struct CheckInfo {
  std::string name;
  int order = 2;             // jet order needed
  double tolerance = 1e-9;   // default, relative to scale
  bool universal = true;     // holds on every scenario; part of the default set
  bool conditional = false;  // only meaningful where its hypotheses hold
  bool scalar = false;       // carries a signed scalar value
  bool target = false;       // compares a value against a target expression
  std::string summary;
};

const std::vector<CheckInfo>& check_registry();
const CheckInfo& check_info(const std::string& name);
bool is_known_check(const std::string& name);
bool check_is_scalar(const std::string& name);
bool check_accepts_target(const std::string& name);
std::vector<std::string> default_checks();

struct PointValue {
  PointValue() = default;
  PointValue(double r, double s) : residual(r), scale(s) {}

  double residual = 0.0;
  double scale = 1.0;
  std::optional<double> value;       // signed scalar value
  std::optional<double> hypothesis;  // conditional checks: hypothesis residual
  double hypothesis_scale = 1.0;
  bool applicable = true;            // false: the check does not apply at this point (e.g. trace4 for n != 4)
};

// Per-point evaluation state shared by all checks at one point.
class PointContext {
 public:
  PointContext(const AffineMetricSpec& spec, std::vector<double> point, int order, std::uint64_t seed,
               std::size_t point_index);

  const AffineGeometry& geo() const { return geo_; }
  const std::vector<double>& point() const { return point_; }
  // Independent generator per (seed, point, check).
  std::mt19937_64 rng(const std::string& check) const;

  const CurvatureTable& direct();
  const CurvatureTable& closed();
  const FieldEquationResiduals& field_residuals();
  const DivergenceIdentities& identities();
  const Conservation& conservation();
  double field_scale();

 private:
  std::vector<double> point_;
  AffineGeometry geo_;
  std::uint64_t seed_;
  std::size_t index_;
  std::optional<CurvatureTable> direct_, closed_;
  std::optional<FieldEquationResiduals> residuals_;
  std::optional<DivergenceIdentities> identities_;
  std::optional<Conservation> conservation_;
  std::optional<double> field_scale_;
};

// `target` is the expected value for target checks (0 when absent).
PointValue evaluate_check(const std::string& name, PointContext& ctx, double target = 0.0);

}  // namespace affgeo
