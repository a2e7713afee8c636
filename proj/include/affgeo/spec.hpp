#pragma once

// The triple (g, A♭, θ) on a chart, and a seeded generator of smooth random
// instances used by tests and the random_smooth fixture.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "affgeo/geometry.hpp"

namespace affgeo {

struct AffineMetricSpec {
  Chart chart;
  MetricField g;
  std::vector<Expression> a_flat;  // covariant components of A♭
  Expression theta;

  int dim() const { return chart.dim(); }
  // Chart checks plus expression coordinate sets and component counts.
  void validate() const;
};

// Expression text for the component form of an AffineMetricSpec.
struct SpecText {
  std::vector<std::string> coords;
  std::vector<int> signature;
  std::vector<std::pair<double, double>> region;
  std::vector<std::vector<std::string>> metric_lower;
  std::vector<std::string> a_flat;
  std::string theta;
};

AffineMetricSpec build_spec(const SpecText& text);

// Smooth trigonometric perturbation text: sum of `terms` waves a*sin(k.x + c)
// with a in [-amplitude, amplitude] and |k_i| <= wavenumber.
std::string random_wave_text(std::uint64_t& state, std::span<const std::string> coords, int terms,
                             double amplitude, double wavenumber);

// 4-d scenario (t, x, y, z) with g = diag(-1, 1, 1, 1) + 0.1 h, random A♭ and
// θ, sampling region [-1, 1]^4. The same seed always yields the same text.
SpecText random_scenario_text(std::uint64_t seed);
AffineMetricSpec random_scenario(std::uint64_t seed);

}  // namespace affgeo
