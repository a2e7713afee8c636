#include "affgeo/runner.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "affgeo/checks.hpp"
#include "affgeo/errors.hpp"
#include "affgeo/parallel.hpp"

namespace affgeo {

namespace {

using json = nlohmann::ordered_json;

constexpr double kHypothesisTolerance = 1e-9;

json point_json(const std::vector<double>& p) {
  json a = json::array();
  for (double x : p) a.push_back(x);
  return a;
}

json base_report(const char* command, const Scenario& sc, std::uint64_t seed, int points) {
  json r;
  r["schema_version"] = kReportSchemaVersion;
  r["engine_version"] = AFFGEO_VERSION;
  r["command"] = command;
  r["scenario"] = sc.id;
  if (!sc.generator.empty()) r["generator"] = sc.generator;
  r["dimension"] = sc.spec.dim();
  r["seed"] = seed;
  r["points"] = points;
  return r;
}

enum class Status { Ok, Skipped, Error };

struct Outcome {
  Status status = Status::Ok;
  PointValue value;
  double target = 0.0;
  double reference = 0.0;
  std::string kind, message;
};

std::vector<CheckSetting> resolve_checks(const Scenario& sc, const RunOptions& opt) {
  if (opt.checks.empty()) return sc.checks;
  std::vector<std::string> names = opt.checks;
  if (names.size() == 1 && names[0] == "all") {
    names.clear();
    for (const auto& c : check_registry()) names.push_back(c.name);
  }
  std::vector<CheckSetting> out;
  for (const auto& n : names) {
    if (!is_known_check(n)) throw SchemaError("--checks", "unknown check '" + n + "'");
    CheckSetting s(n);
    for (const auto& c : sc.checks)
      if (c.name == n) s = c;
    out.push_back(s);
  }
  return out;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<std::vector<double>> sample_points(const AffineMetricSpec& spec, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = spec.dim();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(count), std::vector<double>(n));
  for (auto& p : out)
    for (int i = 0; i < n; ++i) {
      const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;  // (0, 1)
      const auto [lo, hi] = spec.chart.region[i];
      p[i] = lo + (hi - lo) * u;
    }
  return out;
}

RunResult run(const Scenario& sc, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<CheckSetting> checks = resolve_checks(sc, opt);
  const int count = opt.points.value_or(sc.points);
  const std::uint64_t seed = opt.seed.value_or(sc.seed);
  if (count < 1) throw SchemaError("--points", "need at least one point");
  const auto points = sample_points(sc.spec, count, seed);

  int order = 1;
  for (const auto& c : checks) order = std::max(order, check_info(c.name).order);

  const std::size_t nc = checks.size();
  std::vector<std::vector<Outcome>> results(points.size(), std::vector<Outcome>(nc));
  parallel_for(points.size(), opt.threads, [&](std::size_t pi) {
    auto& row = results[pi];
    std::optional<PointContext> ctx;
    try {
      ctx.emplace(sc.spec, points[pi], order, seed, pi);
    } catch (const Error& e) {
      for (auto& o : row) {
        o.status = e.kind() == ErrorKind::Domain ? Status::Skipped : Status::Error;
        o.kind = to_string(e.kind());
        o.message = e.what();
      }
      return;
    }
    for (std::size_t ci = 0; ci < nc; ++ci) {
      const CheckSetting& cs = checks[ci];
      Outcome& o = row[ci];
      try {
        if (cs.target) o.target = evaluate(*cs.target, points[pi]);
        if (cs.reference) o.reference = evaluate(*cs.reference, points[pi]);
        o.value = evaluate_check(cs.name, *ctx, o.target);
      } catch (const Error& e) {
        o.status = e.kind() == ErrorKind::Domain ? Status::Skipped : Status::Error;
        o.kind = to_string(e.kind());
        o.message = e.what();
      } catch (const std::exception& e) {
        o.status = Status::Error;
        o.kind = "Internal";
        o.message = e.what();
      }
    }
  });

  json report = base_report("verify", sc, seed, count);
  json records = json::array();
  json errors = json::array();
  int passed = 0, failed = 0, not_applicable = 0, skipped_points = 0, failing = 0;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    bool skipped = false;
    for (const auto& o : results[pi]) skipped = skipped || o.status == Status::Skipped;
    skipped_points += skipped;
  }

  for (std::size_t ci = 0; ci < nc; ++ci) {
    const CheckSetting& cs = checks[ci];
    const CheckInfo& info = check_info(cs.name);
    const double tol = cs.tolerance.value_or(info.tolerance);
    int evaluated = 0, skipped = 0, inapplicable = 0;
    double max_abs = 0.0, max_scale = 0.0, max_scaled = 0.0, min_scaled = std::numeric_limits<double>::infinity();
    double hyp = 0.0, ref_dev = 0.0;
    std::size_t worst = 0;
    bool have_hyp = false;
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
      const Outcome& o = results[pi][ci];
      if (o.status == Status::Skipped) {
        ++skipped;
        continue;
      }
      if (o.status == Status::Error) {
        errors.push_back(json{{"check", cs.name}, {"point", point_json(points[pi])}, {"kind", o.kind}, {"message", o.message}});
        continue;
      }
      if (!o.value.applicable) {
        ++inapplicable;
        continue;
      }
      ++evaluated;
      const double scaled = o.value.residual / o.value.scale;
      max_abs = std::max(max_abs, o.value.residual);
      max_scale = std::max(max_scale, o.value.scale);
      min_scaled = std::min(min_scaled, scaled);
      if (evaluated == 1 || scaled > max_scaled) {
        max_scaled = scaled;
        worst = pi;
      }
      if (o.value.hypothesis) {
        have_hyp = true;
        hyp = std::max(hyp, *o.value.hypothesis / o.value.hypothesis_scale);
      }
      if (cs.reference) ref_dev = std::max(ref_dev, std::abs(o.value.value.value_or(0.0) - o.reference) / o.value.scale);
    }

    json rec;
    rec["name"] = cs.name;
    rec["description"] = info.summary;
    rec["points_evaluated"] = evaluated;
    rec["points_skipped"] = skipped;
    rec["max_abs_residual"] = max_abs;
    rec["scale"] = max_scale;
    rec["max_scaled_residual"] = max_scaled;
    rec["tolerance"] = tol;
    const bool pass = evaluated > 0 && max_scaled <= tol;
    rec["pass"] = pass;
    rec["expect"] = cs.expect;
    if (!cs.target_text.empty()) rec["target"] = cs.target_text;
    bool as_expected = pass;
    if (cs.expect == "nonzero") {
      rec["min_scaled_residual"] = evaluated > 0 ? min_scaled : 0.0;
      as_expected = evaluated > 0 && min_scaled > tol;
      if (cs.reference) {
        const bool match = evaluated > 0 && ref_dev <= cs.reference_tolerance;
        rec["reference"] = json{{"expression", cs.reference_text},
                                {"tolerance", cs.reference_tolerance},
                                {"max_scaled_deviation", ref_dev},
                                {"match", match}};
        as_expected = as_expected && match;
      }
    }
    // A check the chart does not support (trace4 off n = 4), or a
    // conditional check whose hypotheses fail, is reported but not judged.
    bool applicable = !(evaluated == 0 && inapplicable > 0);
    if (info.conditional) {
      rec["conditional"] = true;
      rec["hypothesis_max_scaled_residual"] = have_hyp ? hyp : 0.0;
      rec["hypothesis_tolerance"] = kHypothesisTolerance;
      applicable = applicable && evaluated > 0 && hyp <= kHypothesisTolerance;
    }
    rec["applicable"] = applicable;
    rec["as_expected"] = as_expected;
    if (evaluated > 0) rec["worst_point"] = point_json(points[worst]);
    if (!applicable)
      ++not_applicable;
    else if (as_expected)
      ++passed;
    else
      ++failed;
    // conditional checks annotate the run and never fail it
    if (applicable && !as_expected && !info.conditional) ++failing;
    records.push_back(std::move(rec));
  }

  report["checks"] = std::move(records);
  report["errors"] = errors;
  report["summary"] = json{{"checks", nc},
                           {"passed", passed},
                           {"failed", failed},
                           {"not_applicable", not_applicable},
                           {"skipped_points", skipped_points}};
  const int code = !errors.empty() ? kExitRuntime : failing > 0 ? kExitCheckFailure : kExitPass;
  report["status"] = code == kExitPass ? "pass" : code == kExitCheckFailure ? "fail" : "error";
  report["exit_code"] = code;
  report["wall_time_s"] = elapsed(t0);
  return {std::move(report), code};
}

RunResult run_variation(const Scenario& sc, const DeformationFamily& fam, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const int count = opt.points.value_or(sc.points);
  const std::uint64_t seed = opt.seed.value_or(sc.seed);
  if (count < 1) throw SchemaError("--points", "need at least one point");
  const auto points = sample_points(sc.spec, count, seed);
  const auto quantities = all_variation_quantities();
  constexpr double kPointTol = 1e-6, kActionTol = 1e-3;

  struct Cell {
    bool ok = false;
    PointwiseVariation v;
    std::string kind, message;
  };
  std::vector<std::vector<Cell>> cells(points.size(), std::vector<Cell>(quantities.size()));
  std::vector<double> tmax(points.size(), std::numeric_limits<double>::infinity());
  parallel_for(points.size(), opt.threads, [&](std::size_t pi) {
    tmax[pi] = fam.t_max(points[pi]);
    for (std::size_t q = 0; q < quantities.size(); ++q) {
      Cell& c = cells[pi][q];
      try {
        c.v = first_variation_pointwise(fam, points[pi], quantities[q]);
        c.ok = true;
      } catch (const Error& e) {
        c.kind = to_string(e.kind());
        c.message = e.what();
      }
    }
  });

  json report = base_report("variation", sc, seed, count);
  report["t0"] = fam.t0;
  double t_max = std::numeric_limits<double>::infinity();
  for (double t : tmax) t_max = std::min(t_max, t);
  report["t_max"] = std::isfinite(t_max) ? json(t_max) : json(nullptr);
  json records = json::array(), errors = json::array();
  int failing = 0;
  for (std::size_t q = 0; q < quantities.size(); ++q) {
    int evaluated = 0;
    double max_abs = 0.0, max_scale = 0.0, max_rel = 0.0;
    std::size_t worst = 0;
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
      const Cell& c = cells[pi][q];
      if (!c.ok) {
        errors.push_back(json{{"check", to_string(quantities[q])}, {"point", point_json(points[pi])}, {"kind", c.kind}, {"message", c.message}});
        continue;
      }
      ++evaluated;
      max_abs = std::max(max_abs, c.v.abs_err);
      max_scale = std::max(max_scale, c.v.scale);
      if (c.v.rel_err > max_rel) {
        max_rel = c.v.rel_err;
        worst = pi;
      }
    }
    const bool pass = evaluated > 0 && max_rel <= kPointTol;
    failing += !pass;
    json rec{{"name", to_string(quantities[q])},
             {"points_evaluated", evaluated},
             {"max_abs_residual", max_abs},
             {"scale", max_scale},
             {"max_scaled_residual", max_rel},
             {"tolerance", kPointTol},
             {"pass", pass}};
    if (evaluated > 0) rec["worst_point"] = point_json(points[worst]);
    records.push_back(std::move(rec));
  }

  if (sc.box) {
    json rec{{"name", "action_variation"}, {"resolution", sc.box->resolution}};
    try {
      const ActionVariation fine = action_variation(fam, *sc.box, opt.threads);
      rec["numeric"] = fine.numeric;
      rec["analytic"] = fine.analytic;
      rec["abs_err"] = fine.abs_err;
      rec["rel_err"] = fine.rel_err;
      rec["tolerance"] = kActionTol;
      bool pass = fine.rel_err <= kActionTol;
      if (sc.check_refinement) {
        PeriodicBox coarse = *sc.box;
        coarse.resolution /= 2;
        const ActionVariation c = action_variation(fam, coarse, opt.threads);
        const bool improves = fine.abs_err <= c.abs_err;
        rec["refinement"] = json{{"resolution", coarse.resolution}, {"abs_err", c.abs_err}, {"rel_err", c.rel_err}, {"improves", improves}};
        pass = pass && improves;
      }
      rec["pass"] = pass;
      failing += !pass;
    } catch (const Error& e) {
      errors.push_back(json{{"check", "action_variation"}, {"kind", to_string(e.kind())}, {"message", e.what()}});
    }
    records.push_back(std::move(rec));
  }

  report["checks"] = std::move(records);
  report["errors"] = errors;
  const int code = !errors.empty() ? kExitRuntime : failing > 0 ? kExitCheckFailure : kExitPass;
  report["status"] = code == kExitPass ? "pass" : code == kExitCheckFailure ? "fail" : "error";
  report["exit_code"] = code;
  report["wall_time_s"] = elapsed(t0);
  return {std::move(report), code};
}

RunResult error_result(const std::string& command, const std::exception& e) {
  json r;
  r["schema_version"] = kReportSchemaVersion;
  r["engine_version"] = AFFGEO_VERSION;
  r["command"] = command;
  int code = kExitRuntime;
  std::string kind = "Internal";
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    kind = to_string(err->kind());
    switch (err->kind()) {
      case ErrorKind::Schema:
      case ErrorKind::Parse:
      case ErrorKind::UnknownIdentifier:
      case ErrorKind::Validation:
      case ErrorKind::Io:
      case ErrorKind::DimensionMismatch:
        code = kExitSchema;
        break;
      default:
        code = kExitRuntime;
    }
    json detail{{"kind", kind}, {"message", e.what()}};
    if (const auto* s = dynamic_cast<const SchemaError*>(&e)) detail["path"] = s->path();
    if (const auto* p = dynamic_cast<const ParseError*>(&e)) detail["offset"] = p->offset();
    r["error"] = detail;
  } else {
    r["error"] = json{{"kind", kind}, {"message", e.what()}};
  }
  r["status"] = "error";
  r["exit_code"] = code;
  return {std::move(r), code};
}

}  // namespace affgeo
