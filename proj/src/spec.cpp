#include "affgeo/spec.hpp"

#include <charconv>
#include <random>

#include "affgeo/errors.hpp"

namespace affgeo {

namespace {

std::string number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  std::string s(buf, end);
  return v < 0 ? "(" + s + ")" : s;
}

}  // namespace

void AffineMetricSpec::validate() const {
  chart.validate();
  const int n = dim();
  if (g.dim() != n) fail(ErrorKind::DimensionMismatch, "metric dimension differs from chart");
  if (static_cast<int>(a_flat.size()) != n) fail(ErrorKind::DimensionMismatch, "A♭ needs one component per coordinate");
  auto same_coords = [&](const Expression& e) {
    if (!e.valid() || e.coords() != chart.coords)
      fail(ErrorKind::Validation, "expression is not defined over the chart coordinates");
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) same_coords(g.component(i, j));
  for (const auto& e : a_flat) same_coords(e);
  same_coords(theta);
}

AffineMetricSpec build_spec(const SpecText& text) {
  AffineMetricSpec spec;
  spec.chart = Chart{text.coords, text.signature, text.region};
  spec.chart.validate();
  std::vector<std::vector<Expression>> lower;
  for (const auto& row : text.metric_lower) {
    lower.emplace_back();
    for (const auto& s : row) lower.back().push_back(parse(s, text.coords));
  }
  spec.g = MetricField::from_lower(lower);
  for (const auto& s : text.a_flat) spec.a_flat.push_back(parse(s, text.coords));
  spec.theta = parse(text.theta, text.coords);
  spec.validate();
  return spec;
}

std::string random_wave_text(std::uint64_t& state, std::span<const std::string> coords, int terms,
                             double amplitude, double wavenumber) {
  std::mt19937_64 rng(state);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::string out;
  for (int m = 0; m < terms; ++m) {
    if (m) out += " + ";
    out += number(amplitude * u(rng)) + "*sin(";
    for (std::size_t i = 0; i < coords.size(); ++i) out += number(wavenumber * u(rng)) + "*" + coords[i] + " + ";
    out += number(3.0 * u(rng)) + ")";
  }
  state = rng();
  return out;
}

SpecText random_scenario_text(std::uint64_t seed) {
  SpecText t;
  t.coords = {"t", "x", "y", "z"};
  t.signature = {-1, 1, 1, 1};
  t.region.assign(4, {-1.0, 1.0});
  std::uint64_t state = seed * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL;
  for (int i = 0; i < 4; ++i) {
    t.metric_lower.emplace_back();
    for (int j = 0; j <= i; ++j) {
      const std::string base = i == j ? (i == 0 ? "-1" : "1") : "0";
      t.metric_lower.back().push_back(base + " + 0.1*(" + random_wave_text(state, t.coords, 2, 1.0, 1.0) + ")");
    }
  }
  for (int i = 0; i < 4; ++i) t.a_flat.push_back(random_wave_text(state, t.coords, 2, 0.8, 1.2));
  t.theta = random_wave_text(state, t.coords, 2, 0.4, 1.0);
  return t;
}

AffineMetricSpec random_scenario(std::uint64_t seed) { return build_spec(random_scenario_text(seed)); }

}  // namespace affgeo
