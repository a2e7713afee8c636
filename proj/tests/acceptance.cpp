// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "affgeo/checks.hpp"
#include "affgeo/field_eq.hpp"
#include "affgeo/runner.hpp"
#include "affgeo/scenario.hpp"
#include "affgeo/spec.hpp"
#include "affgeo/variation.hpp"

using namespace affgeo;
using json = nlohmann::ordered_json;

namespace {

std::string fixture(const std::string& name) { return std::string(AFFGEO_FIXTURE_DIR) + "/" + name + ".toml"; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const json& record(const json& report, const std::string& name) {
  for (const auto& c : report["checks"])
    if (c["name"] == name) return c;
  static const json none = json{{"name", name}, {"missing", true}};
  return none;
}

double num(const json& rec, const char* key) {
  return rec.contains(key) && rec[key].is_number() ? rec[key].get<double>() : INFINITY;
}

RunResult run_checks(const Scenario& base, const std::vector<std::string>& names, int points = 0) {
  Scenario sc = base;
  sc.checks.clear();
  for (const auto& n : names) sc.checks.emplace_back(n);
  RunOptions opt;
  if (points > 0) opt.points = points;
  return run(sc, opt);
}

Scenario random_smooth(std::uint64_t seed, int points) {
  Scenario sc;
  sc.id = "random_" + std::to_string(seed);
  sc.spec = random_scenario(seed);
  sc.points = points;
  sc.seed = seed;
  return sc;
}

// Worst scaled residual per check over `count` random scenarios.
struct Sweep {
  std::vector<double> worst;
  int errors = 0;
  int evaluated = 0;
};

Sweep sweep(const std::vector<std::string>& names, int count, int points, std::uint64_t first_seed) {
  Sweep s;
  s.worst.assign(names.size(), 0.0);
  for (int i = 0; i < count; ++i) {
    const auto r = run_checks(random_smooth(first_seed + i, points), names);
    s.errors += static_cast<int>(r.report["errors"].size());
    for (std::size_t k = 0; k < names.size(); ++k) {
      const auto& rec = record(r.report, names[k]);
      s.worst[k] = std::max(s.worst[k], num(rec, "max_scaled_residual"));
      s.evaluated += rec.value("points_evaluated", 0);
    }
  }
  return s;
}

bool report_line(int id, bool ok, const std::string& detail) {
  std::printf("CRITERION %d %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  return ok;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool known_solutions() {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario mink = load_scenario(fixture("minkowski"));
  RunOptions all;
  all.checks = {"all"};
  const auto rm = run(mink, all);
  double mink_worst = 0.0;
  bool mink_ok = rm.report["errors"].empty();
  for (const auto& c : rm.report["checks"]) {
    if (!c["applicable"].get<bool>()) continue;
    mink_worst = std::max(mink_worst, num(c, "max_abs_residual"));
  }
  mink_ok = mink_ok && mink_worst <= 1e-12;

  const Scenario schw = load_scenario(fixture("schwarzschild"));
  const auto rs = run_checks(schw, {"ricci", "M1", "m1", "M2", "M3"}, 100);
  double schw_worst = 0.0;
  bool schw_ok = rs.report["errors"].empty();
  for (const auto& c : rs.report["checks"]) {
    schw_worst = std::max(schw_worst, num(c, "max_scaled_residual"));
    schw_ok = schw_ok && c["points_evaluated"] == 100;
  }
  schw_ok = schw_ok && schw_worst <= 1e-9;

  const Scenario s2 = load_scenario(fixture("sphere2"));
  const auto r2 = run(s2, {});
  const double sphere_dev = num(record(r2.report, "scalar_curvature"), "max_abs_residual");
  const bool sphere_ok = sphere_dev <= 1e-10;

  const double wall = seconds_since(t0);
  return report_line(1, mink_ok && schw_ok && sphere_ok && wall <= 5.0,
                     "minkowski max|r|=" + fmt("%.2e", mink_worst) + " schwarzschild max scaled=" +
                         fmt("%.2e", schw_worst) + " sphere |R-2|=" + fmt("%.2e", sphere_dev) +
                         " time=" + fmt("%.2fs", wall));
}

bool prop1_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_abs = 0.0;
  int errors = 0, evaluated = 0;
  for (int i = 0; i < 200; ++i) {
    const auto r = run_checks(random_smooth(10000 + i, 1), {"prop1_vs_koszul"});
    const auto& rec = record(r.report, "prop1_vs_koszul");
    errors += static_cast<int>(r.report["errors"].size());
    evaluated += rec.value("points_evaluated", 0);
    worst_abs = std::max(worst_abs, num(rec, "max_abs_residual"));
  }
  const double wall = seconds_since(t0);
  return report_line(2, errors == 0 && evaluated == 200 && worst_abs <= 1e-9 && wall <= 30.0,
                     "200 scenarios, max|closed-form - Koszul|=" + fmt("%.2e", worst_abs) + " time=" + fmt("%.2fs", wall));
}

bool prop234_oracles() {
  const std::vector<std::string> names{"prop2_vs_direct", "prop3_trace", "prop4_trace"};
  const Sweep s = sweep(names, 100, 1, 20000);
  const Scenario flat = load_scenario(fixture("flat_xdy"));
  const auto r = run(flat, {});
  const auto& hat = record(r.report, "hat_scalar");
  const double hat_dev = num(hat, "max_abs_residual");
  const bool ok = s.errors == 0 && s.evaluated == 300 && s.worst[0] <= 1e-7 && s.worst[1] <= 1e-7 &&
                  s.worst[2] <= 1e-10 && hat_dev <= 1e-10 && hat.value("target", "") == "-0.5";
  return report_line(3, ok,
                     "100 scenarios: prop2=" + fmt("%.2e", s.worst[0]) + " prop3=" + fmt("%.2e", s.worst[1]) +
                         " prop4=" + fmt("%.2e", s.worst[2]) + "; flat x dy |R_hat+1/2|=" + fmt("%.2e", hat_dev));
}

bool identity_suite() {
  const std::vector<std::string> names{"first_bianchi", "dd_zero", "s_theta_trace", "trff_omega", "contracted_bianchi"};
  const Sweep s = sweep(names, 20, 5, 30000);
  const double worst = *std::max_element(s.worst.begin(), s.worst.end());
  std::string detail = "20 scenarios x 5 points:";
  for (std::size_t k = 0; k < names.size(); ++k) detail += " " + names[k] + "=" + fmt("%.1e", s.worst[k]);
  return report_line(4, s.errors == 0 && s.evaluated == 500 && worst <= 1e-6, detail);
}

DeformationFamily random_family(const AffineMetricSpec& base, std::uint64_t& state) {
  const auto& c = base.chart.coords;
  const int n = base.dim();
  DeformationFamily fam;
  fam.base = base;
  std::vector<std::vector<Expression>> lower(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) lower[i].push_back(parse(random_wave_text(state, c, 2, 0.3, 1.5), c));
  fam.s = MetricField::from_lower(lower);
  for (int i = 0; i < n; ++i) fam.delta.push_back(parse(random_wave_text(state, c, 2, 0.3, 1.5), c));
  fam.h = parse(random_wave_text(state, c, 2, 0.3, 1.5), c);
  fam.validate();
  return fam;
}

bool variation_suite() {
  std::uint64_t state = 40000;
  std::mt19937_64 rng(40000);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  double worst = 0.0;
  std::string worst_q;
  for (int trial = 0; trial < 100; ++trial) {
    const auto fam = random_family(random_scenario(40000 + trial), state);
    std::vector<double> p(4);
    for (auto& x : p) x = coord(rng);
    for (auto q : all_variation_quantities()) {
      const auto v = first_variation_pointwise(fam, p, q);
      if (!(v.rel_err <= worst)) {
        worst = v.rel_err;
        worst_q = to_string(q);
      }
    }
  }
  const Scenario torus = load_scenario(fixture("torus_variation"));
  const auto& fam = *torus.family;
  PeriodicBox box = *torus.box;
  const int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto fine = action_variation(fam, box, threads);
  box.resolution /= 2;
  const auto coarse = action_variation(fam, box, threads);
  const bool ok = worst <= 1e-6 && fine.rel_err <= 1e-3 && fine.abs_err < coarse.abs_err;
  return report_line(5, ok,
                     "100 triples max rel=" + fmt("%.2e", worst) + " (" + worst_q + "); torus action rel@32=" +
                         fmt("%.2e", fine.rel_err) + " rel@16=" + fmt("%.2e", coarse.rel_err));
}

AffineMetricSpec reissner_nordstrom(double kappa) {
  SpecText t;
  t.coords = {"t", "r", "phi", "psi"};
  t.signature = {-1, 1, 1, 1};
  t.region = {{-1, 1}, {3, 10}, {0.3, 2.8}, {-1, 1}};
  const std::string f = "(1 - 2/r + 0.25/r^2)";
  t.metric_lower = {{"-" + f}, {"0", "1/" + f}, {"0", "0", "r^2"}, {"0", "0", "0", "r^2*sin(phi)^2"}};
  t.a_flat = {fmt("%.17g", kappa * 0.5) + "/r", "0", "0", "0"};
  t.theta = "0";
  return build_spec(t);
}

// M1 is affine in kappa^2 when theta = 0: M1(k) = E0 + k^2 (E1 - E0).
double calibrate_kappa_sq(std::span<const double> p) {
  const auto e0 = residuals(AffineGeometry::at(reissner_nordstrom(0.0), p, 2)).m1_big.values();
  const auto e1 = residuals(AffineGeometry::at(reissner_nordstrom(1.0), p, 2)).m1_big.values();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < e0.size(); ++i) {
    const double d = e1[i] - e0[i];
    num -= e0[i] * d;
    den += d * d;
  }
  return num / den;
}

bool einstein_maxwell() {
  const auto probe = reissner_nordstrom(1.0);
  const auto pts = sample_points(probe, 50, 606);
  const double k2 = calibrate_kappa_sq(pts[0]);
  double spread = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) spread = std::max(spread, std::abs(calibrate_kappa_sq(pts[i]) - k2));
  const double kappa = std::sqrt(k2);

  Scenario sc;
  sc.id = "rn_calibrated";
  sc.spec = reissner_nordstrom(kappa);
  sc.points = 50;
  sc.seed = 606;
  for (const char* n : {"M1", "M2", "M3"}) sc.checks.emplace_back(n);
  sc.checks[0].tolerance = sc.checks[1].tolerance = 1e-7;
  sc.checks[2].expect = "nonzero";
  sc.checks[2].reference_text = fmt("%.17g", k2 * 0.25) + "/(4*r^4)";
  sc.checks[2].reference = parse(sc.checks[2].reference_text, sc.spec.chart.coords);
  const auto r = run(sc, {});
  const auto &m1 = record(r.report, "M1"), &m2 = record(r.report, "M2"), &m3 = record(r.report, "M3");
  const bool ok = r.report["errors"].empty() && m1["pass"] == true && m2["pass"] == true &&
                  m3["as_expected"] == true && m3["reference"]["match"] == true && spread <= 1e-7 &&
                  m1["points_evaluated"] == 50;

  const auto fx = run(load_scenario(fixture("reissner_nordstrom")), {});
  const bool fixture_ok = fx.exit_code == kExitPass && record(fx.report, "M3")["as_expected"] == true;
  return report_line(6, ok && fixture_ok,
                     "kappa=" + fmt("%.12f", kappa) + " spread(kappa^2)=" + fmt("%.1e", spread) + " M1=" +
                         fmt("%.1e", num(m1, "max_scaled_residual")) + " M2=" + fmt("%.1e", num(m2, "max_scaled_residual")) +
                         " M3 min=" + fmt("%.1e", num(m3, "min_scaled_residual")) + " dev=" +
                         fmt("%.1e", num(m3["reference"], "max_scaled_deviation")) +
                         (fixture_ok ? "; fixture ok" : "; fixture FAILED"));
}

bool conservation() {
  const Scenario pw = load_scenario(fixture("plane_wave"));
  const auto r = run_checks(pw, {"M2", "M3", "conservation"}, 100);
  const auto &m2 = record(r.report, "M2"), &m3 = record(r.report, "M3"), &cons = record(r.report, "conservation");
  const bool pw_ok = r.report["errors"].empty() && num(m2, "max_scaled_residual") <= 1e-9 &&
                     num(m3, "max_scaled_residual") <= 1e-9 && cons["applicable"] == true &&
                     num(cons, "max_scaled_residual") <= 1e-7 && cons["points_evaluated"] == 100;
  const std::vector<std::string> names{"div_ric_omega", "div_trff_g", "div_t_theta"};
  const Sweep s = sweep(names, 20, 5, 50000);
  const double worst = *std::max_element(s.worst.begin(), s.worst.end());
  return report_line(7, pw_ok && s.errors == 0 && s.evaluated == 300 && worst <= 1e-6,
                     "plane wave M2=" + fmt("%.1e", num(m2, "max_scaled_residual")) + " M3=" +
                         fmt("%.1e", num(m3, "max_scaled_residual")) + " div(T)=" +
                         fmt("%.1e", num(cons, "max_scaled_residual")) + "; unconditional identities max=" +
                         fmt("%.1e", worst));
}

bool determinism() {
  bool same = true;
  int runs = 0;
  for (const char* name : {"random_smooth", "schwarzschild", "plane_wave"}) {
    const Scenario sc = load_scenario(fixture(name));
    std::string first;
    for (int threads : {1, 2, 4, 3, 1}) {
      RunOptions opt;
      opt.threads = threads;
      json rep = run(sc, opt).report;
      rep.erase("wall_time_s");
      const std::string text = rep.dump();
      if (first.empty()) first = text;
      same = same && text == first;
      ++runs;
    }
  }
  return report_line(8, same, std::to_string(runs) + " runs over 3 fixtures with 1-4 threads, reports " +
                                  (same ? "identical" : "DIFFER"));
}

}  // namespace

int main() {
  const std::vector<std::function<bool()>> criteria{known_solutions, prop1_oracle,   prop234_oracles,
                                                    identity_suite,  variation_suite, einstein_maxwell,
                                                    conservation,    determinism};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      failed += !criteria[i]();
    } catch (const std::exception& e) {
      report_line(static_cast<int>(i + 1), false, std::string("error: ") + e.what());
      ++failed;
    }
  }
  return failed ? 1 : 0;
}
