#include "affgeo/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "affgeo/checks.hpp"
#include "affgeo/errors.hpp"
#include "affgeo/toml.hpp"

namespace affgeo {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void schema(const std::string& path, const std::string& what) { throw SchemaError(path, what); }

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void only_keys(const json& table, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!table.is_object()) schema(path, "expected a table");
  for (const auto& [key, value] : table.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) schema(join(path, key), "unknown key");
  }
}

const json* find(const json& table, const char* key) {
  auto it = table.find(key);
  return it == table.end() ? nullptr : &*it;
}

const json& require(const json& table, const char* key, const std::string& path) {
  const json* v = find(table, key);
  if (!v) schema(join(path, key), "missing required field");
  return *v;
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) schema(path, "expected a string");
  return v.get<std::string>();
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) schema(path, "expected a number");
  return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) schema(path, "expected an integer");
  return v.get<std::int64_t>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) schema(path, "expected an array");
  return v;
}

std::string number_text(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Expression text; numbers are accepted as constants.
std::string expr_text(const json& v, const std::string& path) {
  if (v.is_number()) return number_text(v.get<double>());
  return as_string(v, path);
}

Expression parse_at(const std::string& text, const std::vector<std::string>& coords, const std::string& path) {
  try {
    return parse(text, coords);
  } catch (const UnknownIdentifier& e) {
    throw ParseError(e.offset(), path + ": unknown identifier '" + e.name() + "' in \"" + text + "\"");
  } catch (const ParseError& e) {
    std::string msg = e.what();
    const auto cut = msg.rfind(" at offset ");
    if (cut != std::string::npos) msg.resize(cut);
    throw ParseError(e.offset(), path + ": " + msg + " in \"" + text + "\"");
  }
}

std::vector<std::string> text_list(const json& v, const std::string& path) {
  std::vector<std::string> out;
  const json& arr = as_array(v, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(expr_text(arr[i], index(path, i)));
  return out;
}

std::vector<std::vector<std::string>> lower_triangle(const json& v, const std::string& path, std::size_t n) {
  const json& rows = as_array(v, path);
  if (rows.size() != n) schema(path, "expected " + std::to_string(n) + " rows");
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = text_list(rows[i], index(path, i));
    if (row.size() != i + 1) schema(index(path, i), "row " + std::to_string(i) + " of a lower triangle needs " + std::to_string(i + 1) + " entries");
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<std::vector<std::string>> diagonal(const json& v, const std::string& path, std::size_t n) {
  const auto d = text_list(v, path);
  if (d.size() != n) schema(path, "expected " + std::to_string(n) + " entries");
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.emplace_back(i + 1, "0");
    out.back()[i] = d[i];
  }
  return out;
}

MetricField metric_from(const std::vector<std::vector<std::string>>& lower, const std::vector<std::string>& coords,
                        const std::string& path) {
  std::vector<std::vector<Expression>> rows;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    rows.emplace_back();
    for (std::size_t j = 0; j < lower[i].size(); ++j)
      rows.back().push_back(parse_at(lower[i][j], coords, index(index(path, i), j)));
  }
  return MetricField::from_lower(rows);
}

std::vector<Expression> exprs_from(const std::vector<std::string>& texts, const std::vector<std::string>& coords,
                                   const std::string& path) {
  std::vector<Expression> out;
  for (std::size_t i = 0; i < texts.size(); ++i) out.push_back(parse_at(texts[i], coords, index(path, i)));
  return out;
}

void probe_signature(const Scenario& sc) {
  const AffineMetricSpec& spec = sc.spec;
  const int n = spec.dim();
  std::mt19937_64 rng(sc.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int probe = 0; probe < 9; ++probe) {
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) {
      const auto [lo, hi] = spec.chart.region[i];
      p[i] = lo + (hi - lo) * (probe == 0 ? 0.5 : unit(rng));
    }
    try {
      check_signature(spec.g.jets(p, 0), spec.chart.negative_directions());
    } catch (const Error& e) {
      std::string where = "(";
      for (int i = 0; i < n; ++i) where += (i ? ", " : "") + number_text(p[i]);
      throw Error(ErrorKind::Validation, "metric fails validation at probe point " + where + "): " + e.what());
    }
  }
}

void read_checks(const json& t, Scenario& sc, const std::vector<std::string>& coords) {
  const std::string path = "checks";
  only_keys(t, path, {"names", "tolerance", "expect", "target", "reference", "reference_tolerance"});
  std::vector<std::string> names;
  if (const json* v = find(t, "names")) {
    const json& arr = as_array(*v, "checks.names");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      names.push_back(as_string(arr[i], index("checks.names", i)));
      if (!is_known_check(names.back())) schema(index("checks.names", i), "unknown check '" + names.back() + "'");
    }
  } else {
    names = default_checks();
  }
  std::set<std::string> listed(names.begin(), names.end());
  for (const auto& n : names) sc.checks.push_back(CheckSetting{n});
  auto setting = [&](const std::string& sub, const std::string& name) -> CheckSetting& {
    if (!listed.count(name)) schema(join(join(path, sub), name), "check is not in checks.names");
    for (auto& c : sc.checks)
      if (c.name == name) return c;
    schema(join(join(path, sub), name), "check is not in checks.names");
  };
  auto each = [&](const char* sub, auto&& fn) {
    if (const json* v = find(t, sub)) {
      if (!v->is_object()) schema(join(path, sub), "expected a table");
      for (const auto& [name, value] : v->items()) fn(setting(sub, name), value, join(join(path, sub), name));
    }
  };
  each("tolerance", [](CheckSetting& c, const json& v, const std::string& p) {
    c.tolerance = as_number(v, p);
    if (!(*c.tolerance > 0.0)) schema(p, "tolerance must be positive");
  });
  each("expect", [](CheckSetting& c, const json& v, const std::string& p) {
    c.expect = as_string(v, p);
    if (c.expect != "pass" && c.expect != "nonzero") schema(p, "expect must be \"pass\" or \"nonzero\"");
  });
  each("target", [&](CheckSetting& c, const json& v, const std::string& p) {
    if (!check_accepts_target(c.name)) schema(p, "check '" + c.name + "' takes no target value");
    c.target_text = expr_text(v, p);
    c.target = parse_at(c.target_text, coords, p);
  });
  each("reference", [&](CheckSetting& c, const json& v, const std::string& p) {
    if (!check_is_scalar(c.name)) schema(p, "reference values need a scalar check");
    c.reference_text = expr_text(v, p);
    c.reference = parse_at(c.reference_text, coords, p);
  });
  each("reference_tolerance", [](CheckSetting& c, const json& v, const std::string& p) {
    c.reference_tolerance = as_number(v, p);
  });
  for (const auto& c : sc.checks)
    if (c.reference && c.expect != "nonzero") schema(join(join(path, "reference"), c.name), "reference values apply to expect = \"nonzero\" checks");
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

DeformationFamily family_from_json(const json& t, const AffineMetricSpec& base, const std::string& path) {
  only_keys(t, path, {"s_lower", "s_diagonal", "delta", "h", "t0"});
  const auto& coords = base.chart.coords;
  const std::size_t n = coords.size();
  DeformationFamily fam;
  fam.base = base;
  const json* lower = find(t, "s_lower");
  const json* diag = find(t, "s_diagonal");
  if (lower && diag) schema(path, "give either s_lower or s_diagonal");
  if (!lower && !diag) schema(join(path, "s_lower"), "missing required field");
  fam.s = lower ? metric_from(lower_triangle(*lower, join(path, "s_lower"), n), coords, join(path, "s_lower"))
                : metric_from(diagonal(*diag, join(path, "s_diagonal"), n), coords, join(path, "s_diagonal"));
  const auto delta = text_list(require(t, "delta", path), join(path, "delta"));
  if (delta.size() != n) schema(join(path, "delta"), "expected " + std::to_string(n) + " entries");
  fam.delta = exprs_from(delta, coords, join(path, "delta"));
  fam.h = parse_at(expr_text(require(t, "h", path), join(path, "h")), coords, join(path, "h"));
  if (const json* v = find(t, "t0")) fam.t0 = as_number(*v, join(path, "t0"));
  fam.validate();
  return fam;
}

Scenario scenario_from_toml(std::string_view text, const std::string& default_id) {
  const json doc = parse_toml(text);
  only_keys(doc, "", {"scenario", "generator", "chart", "metric", "potential", "theta", "sampling", "checks", "box", "family"});
  Scenario sc;
  sc.id = default_id;
  if (const json* s = find(doc, "scenario")) {
    only_keys(*s, "scenario", {"id", "description"});
    if (const json* v = find(*s, "id")) sc.id = as_string(*v, "scenario.id");
    if (const json* v = find(*s, "description")) sc.description = as_string(*v, "scenario.description");
  }

  const json& sampling = require(doc, "sampling", "");
  only_keys(sampling, "sampling", {"points", "seed"});
  const auto seed = as_integer(require(sampling, "seed", "sampling"), "sampling.seed");
  if (seed < 0) schema("sampling.seed", "seed must be non-negative");
  sc.seed = static_cast<std::uint64_t>(seed);
  if (const json* v = find(sampling, "points")) {
    const auto points = as_integer(*v, "sampling.points");
    if (points < 1) schema("sampling.points", "need at least one point");
    sc.points = static_cast<int>(points);
  }

  if (const json* gen = find(doc, "generator")) {
    only_keys(*gen, "generator", {"kind", "seed"});
    for (const char* k : {"chart", "metric", "potential", "theta"})
      if (find(doc, k)) schema(k, "not allowed together with [generator]");
    sc.generator = as_string(require(*gen, "kind", "generator"), "generator.kind");
    if (sc.generator != "random_smooth") schema("generator.kind", "unknown generator '" + sc.generator + "'");
    const auto gseed = as_integer(require(*gen, "seed", "generator"), "generator.seed");
    sc.spec = random_scenario(static_cast<std::uint64_t>(gseed));
  } else {
    const json& chart = require(doc, "chart", "");
    only_keys(chart, "chart", {"coords", "signature", "region", "exclude"});
    SpecText st;
    const json& coords = as_array(require(chart, "coords", "chart"), "chart.coords");
    for (std::size_t i = 0; i < coords.size(); ++i) st.coords.push_back(as_string(coords[i], index("chart.coords", i)));
    const std::size_t n = st.coords.size();
    const json& sig = as_array(require(chart, "signature", "chart"), "chart.signature");
    for (std::size_t i = 0; i < sig.size(); ++i) st.signature.push_back(static_cast<int>(as_integer(sig[i], index("chart.signature", i))));
    const json& region = as_array(require(chart, "region", "chart"), "chart.region");
    for (std::size_t i = 0; i < region.size(); ++i) {
      const json& iv = as_array(region[i], index("chart.region", i));
      if (iv.size() != 2) schema(index("chart.region", i), "expected [lo, hi]");
      st.region.emplace_back(as_number(iv[0], index(index("chart.region", i), 0)), as_number(iv[1], index(index("chart.region", i), 1)));
    }
    if (st.signature.size() != n) schema("chart.signature", "expected " + std::to_string(n) + " entries");
    if (st.region.size() != n) schema("chart.region", "expected " + std::to_string(n) + " intervals");

    const json& metric = require(doc, "metric", "");
    only_keys(metric, "metric", {"lower", "diagonal"});
    const json* lower = find(metric, "lower");
    const json* diag = find(metric, "diagonal");
    if (lower && diag) schema("metric", "give either lower or diagonal");
    if (!lower && !diag) schema("metric.lower", "missing required field");
    st.metric_lower = lower ? lower_triangle(*lower, "metric.lower", n) : diagonal(*diag, "metric.diagonal", n);

    st.a_flat.assign(n, "0");
    if (const json* pot = find(doc, "potential")) {
      only_keys(*pot, "potential", {"a_flat"});
      st.a_flat = text_list(require(*pot, "a_flat", "potential"), "potential.a_flat");
      if (st.a_flat.size() != n) schema("potential.a_flat", "expected " + std::to_string(n) + " entries");
    }
    st.theta = "0";
    if (const json* th = find(doc, "theta")) {
      only_keys(*th, "theta", {"expr"});
      st.theta = expr_text(require(*th, "expr", "theta"), "theta.expr");
    }

    // Parse with paths first so errors point at the field.
    metric_from(st.metric_lower, st.coords, lower ? "metric.lower" : "metric.diagonal");
    exprs_from(st.a_flat, st.coords, "potential.a_flat");
    parse_at(st.theta, st.coords, "theta.expr");
    sc.spec = build_spec(st);

    if (const json* ex = find(chart, "exclude")) {
      const json& arr = as_array(*ex, "chart.exclude");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = index("chart.exclude", i);
        only_keys(arr[i], p, {"coord", "lo", "hi"});
        const std::string name = as_string(require(arr[i], "coord", p), join(p, "coord"));
        Exclusion e;
        e.coord = -1;
        for (std::size_t k = 0; k < n; ++k)
          if (st.coords[k] == name) e.coord = static_cast<int>(k);
        if (e.coord < 0) schema(join(p, "coord"), "unknown coordinate '" + name + "'");
        e.lo = as_number(require(arr[i], "lo", p), join(p, "lo"));
        e.hi = as_number(require(arr[i], "hi", p), join(p, "hi"));
        const auto [rlo, rhi] = st.region[e.coord];
        if (rlo <= e.hi && e.lo <= rhi)
          fail(ErrorKind::Validation, "sampling region of '" + name + "' intersects the excluded band [" +
                                          number_text(e.lo) + ", " + number_text(e.hi) + "]");
        sc.exclusions.push_back(e);
      }
    }
  }

  if (const json* checks = find(doc, "checks")) {
    read_checks(*checks, sc, sc.spec.chart.coords);
  } else {
    for (const auto& n : default_checks()) sc.checks.push_back(CheckSetting{n});
  }

  if (const json* b = find(doc, "box")) {
    only_keys(*b, "box", {"periods", "resolution", "origin", "check_refinement"});
    PeriodicBox box;
    const json& periods = as_array(require(*b, "periods", "box"), "box.periods");
    for (std::size_t i = 0; i < periods.size(); ++i) box.periods.push_back(as_number(periods[i], index("box.periods", i)));
    if (static_cast<int>(box.periods.size()) != sc.spec.dim()) schema("box.periods", "expected one period per coordinate");
    box.resolution = static_cast<int>(as_integer(require(*b, "resolution", "box"), "box.resolution"));
    if (const json* o = find(*b, "origin")) {
      const json& arr = as_array(*o, "box.origin");
      for (std::size_t i = 0; i < arr.size(); ++i) box.origin.push_back(as_number(arr[i], index("box.origin", i)));
    }
    if (const json* r = find(*b, "check_refinement")) {
      if (!r->is_boolean()) schema("box.check_refinement", "expected a boolean");
      sc.check_refinement = r->get<bool>();
    }
    box.validate();
    check_periodic(box, spec_fields(sc.spec));
    sc.box = box;
  }
  if (const json* f = find(doc, "family")) {
    sc.family = family_from_json(*f, sc.spec, "family");
    if (sc.box) check_periodic(*sc.box, family_fields(*sc.family));
  }

  probe_signature(sc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  return scenario_from_toml(read_text_file(path), std::filesystem::path(path).stem().string());
}

DeformationFamily load_family(const std::string& path, const AffineMetricSpec& base) {
  const json doc = parse_toml(read_text_file(path));
  only_keys(doc, "", {"family"});
  return family_from_json(require(doc, "family", ""), base, "family");
}

}  // namespace affgeo
