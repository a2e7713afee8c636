#pragma once

// Scenario files (TOML). Layout:
//
//   [scenario]  id, description
//   [generator] kind = "random_smooth", seed          (replaces chart..theta)
//   [chart]     coords, signature, region = [[lo, hi], ...],
//               exclude = [{coord, lo, hi}, ...]
//   [metric]    lower = [[g00], [g10, g11], ...]  or  diagonal = [...]
//   [potential] a_flat = [...]
//   [theta]     expr
//   [sampling]  points, seed
//   [checks]    names = [...]
//     [checks.tolerance] / [checks.expect] / [checks.target] /
//     [checks.reference] / [checks.reference_tolerance]   keyed by check name
//   [box]       periods, resolution, origin, check_refinement
//   [family]    s_lower | s_diagonal, delta, h, t0      (also in family files)
//
// Expressions are strings (numbers are accepted where an expression is
// expected).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "affgeo/variation.hpp"
#include "json.hpp"

namespace affgeo {

struct CheckSetting {
  explicit CheckSetting(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  std::optional<double> tolerance;
  std::string expect = "pass";  // "pass" or "nonzero"
  std::string target_text;      // expected value for value checks
  std::optional<Expression> target;
  std::string reference_text;   // expected residual for expect = "nonzero"
  std::optional<Expression> reference;
  double reference_tolerance = 1e-9;
};

struct Exclusion {
  int coord = 0;
  double lo = 0.0, hi = 0.0;
};

struct Scenario {
  std::string id;
  std::string description;
  std::string generator;  // empty unless generated
  AffineMetricSpec spec;
  std::vector<Exclusion> exclusions;
  int points = 100;
  std::uint64_t seed = 0;
  std::vector<CheckSetting> checks;  // the default check set when [checks] is absent
  std::optional<PeriodicBox> box;
  bool check_refinement = true;
  std::optional<DeformationFamily> family;
};

Scenario scenario_from_toml(std::string_view text, const std::string& default_id = "scenario");
Scenario load_scenario(const std::string& path);

// [family] table against an existing base.
DeformationFamily family_from_json(const nlohmann::ordered_json& table, const AffineMetricSpec& base,
                                   const std::string& path = "family");
DeformationFamily load_family(const std::string& path, const AffineMetricSpec& base);

std::string read_text_file(const std::string& path);

}  // namespace affgeo
