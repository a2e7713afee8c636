#include "affgeo.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include "affgeo/checks.hpp"
#include "affgeo/errors.hpp"
#include "affgeo/runner.hpp"

struct affgeo_scenario {
  affgeo::Scenario scenario;
};

struct affgeo_family {
  affgeo::DeformationFamily family;
};

namespace {

using json = nlohmann::ordered_json;

thread_local std::string g_last_error;
thread_local std::exception_ptr g_last_exception;

affgeo_status status_of(affgeo::ErrorKind kind) {
  using affgeo::ErrorKind;
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::UnknownIdentifier: return AFFGEO_ERR_PARSE;
    case ErrorKind::Schema: return AFFGEO_ERR_SCHEMA;
    case ErrorKind::Validation: return AFFGEO_ERR_VALIDATION;
    case ErrorKind::Io: return AFFGEO_ERR_IO;
    case ErrorKind::Domain: return AFFGEO_ERR_DOMAIN;
    case ErrorKind::SingularMetric:
    case ErrorKind::SingularBilinearPart:
    case ErrorKind::DegenerateLambda: return AFFGEO_ERR_SINGULAR_METRIC;
    case ErrorKind::DegenerateFamily: return AFFGEO_ERR_DEGENERATE_FAMILY;
    case ErrorKind::DimensionMismatch:
    case ErrorKind::UnsupportedRank:
    case ErrorKind::RankMismatch: return AFFGEO_ERR_DIMENSION;
    default: return AFFGEO_ERR_INTERNAL;
  }
}

template <class F>
affgeo_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    g_last_exception = nullptr;
    return AFFGEO_OK;
  } catch (const affgeo::Error& e) {
    g_last_error = e.what();
    g_last_exception = std::current_exception();
    return status_of(e.kind());
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    g_last_exception = std::current_exception();
    return AFFGEO_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    g_last_exception = std::current_exception();
    return AFFGEO_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

affgeo::RunOptions to_options(const affgeo_run_options* o) {
  affgeo::RunOptions out;
  if (!o) return out;
  if (o->checks && *o->checks) {
    std::stringstream ss(o->checks);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.checks.push_back(item);
  }
  if (o->points > 0) out.points = o->points;
  if (o->has_seed) out.seed = o->seed;
  out.threads = o->threads;
  return out;
}

std::filesystem::path fixture_dir() {
  if (const char* env = std::getenv("AFFGEO_FIXTURE_DIR"); env && *env) return env;
  return AFFGEO_FIXTURE_DIR;
}

}  // namespace

extern "C" {

const char* affgeo_version(void) { return AFFGEO_VERSION; }
const char* affgeo_last_error(void) { return g_last_error.c_str(); }
void affgeo_string_free(char* s) { std::free(s); }

void affgeo_run_options_init(affgeo_run_options* options) {
  if (!options) return;
  options->checks = nullptr;
  options->points = 0;
  options->has_seed = 0;
  options->seed = 0;
  options->threads = 0;
}

affgeo_status affgeo_scenario_load(const char* path, affgeo_scenario** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    auto s = std::make_unique<affgeo_scenario>();
    s->scenario = affgeo::load_scenario(path);
    *out = s.release();
  });
}

affgeo_status affgeo_scenario_parse(const char* toml, const char* id, affgeo_scenario** out) {
  return guarded([&] {
    require(toml && out, "null argument");
    *out = nullptr;
    auto s = std::make_unique<affgeo_scenario>();
    s->scenario = affgeo::scenario_from_toml(toml, id ? id : "scenario");
    *out = s.release();
  });
}

void affgeo_scenario_free(affgeo_scenario* scenario) { delete scenario; }

int affgeo_scenario_dimension(const affgeo_scenario* scenario) { return scenario ? scenario->scenario.spec.dim() : 0; }

int affgeo_scenario_has_family(const affgeo_scenario* scenario) {
  return scenario && scenario->scenario.family ? 1 : 0;
}

affgeo_status affgeo_family_load(const char* path, const affgeo_scenario* scenario, affgeo_family** out) {
  return guarded([&] {
    require(path && scenario && out, "null argument");
    *out = nullptr;
    auto f = std::make_unique<affgeo_family>();
    f->family = affgeo::load_family(path, scenario->scenario.spec);
    if (scenario->scenario.box) affgeo::check_periodic(*scenario->scenario.box, affgeo::family_fields(f->family));
    *out = f.release();
  });
}

void affgeo_family_free(affgeo_family* family) { delete family; }

affgeo_status affgeo_verify(const affgeo_scenario* scenario, const affgeo_run_options* options, char** report,
                            int* exit_code) {
  return guarded([&] {
    require(scenario && report && exit_code, "null argument");
    const auto r = affgeo::run(scenario->scenario, to_options(options));
    *report = dup(dump(r.report));
    *exit_code = r.exit_code;
  });
}

affgeo_status affgeo_variation(const affgeo_scenario* scenario, const affgeo_family* family,
                               const affgeo_run_options* options, char** report, int* exit_code) {
  return guarded([&] {
    require(scenario && report && exit_code, "null argument");
    const affgeo::DeformationFamily* fam = family ? &family->family : nullptr;
    if (!fam) {
      if (!scenario->scenario.family) throw affgeo::SchemaError("family", "scenario has no [family] table and none was given");
      fam = &*scenario->scenario.family;
    }
    const auto r = affgeo::run_variation(scenario->scenario, *fam, to_options(options));
    *report = dup(dump(r.report));
    *exit_code = r.exit_code;
  });
}

affgeo_status affgeo_evaluate_check(const affgeo_scenario* scenario, const char* check, const double* point,
                                    size_t n, double* residual, double* scale) {
  return guarded([&] {
    require(scenario && check && point && residual && scale, "null argument");
    const auto& spec = scenario->scenario.spec;
    if (n != static_cast<size_t>(spec.dim())) affgeo::fail(affgeo::ErrorKind::DimensionMismatch, "point dimension");
    const auto& info = affgeo::check_info(check);
    const std::vector<double> p(point, point + n);
    double target = 0.0;
    for (const auto& cs : scenario->scenario.checks)
      if (cs.name == check && cs.target) target = affgeo::evaluate(*cs.target, p);
    affgeo::PointContext ctx(spec, p, info.order, scenario->scenario.seed, 0);
    const auto v = affgeo::evaluate_check(check, ctx, target);
    *residual = v.residual;
    *scale = v.scale;
  });
}

affgeo_status affgeo_hat_scalar(const affgeo_scenario* scenario, const double* point, size_t n, double* out) {
  return guarded([&] {
    require(scenario && point && out, "null argument");
    const auto& spec = scenario->scenario.spec;
    if (n != static_cast<size_t>(spec.dim())) affgeo::fail(affgeo::ErrorKind::DimensionMismatch, "point dimension");
    *out = affgeo::AffineGeometry::at(spec, std::vector<double>(point, point + n), 2).scalar();
  });
}

affgeo_status affgeo_check_list(char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    json arr = json::array();
    for (const auto& c : affgeo::check_registry())
      arr.push_back(json{{"name", c.name},
                         {"summary", c.summary},
                         {"default_tolerance", c.tolerance},
                         {"universal", c.universal},
                         {"conditional", c.conditional}});
    *out = dup(dump(arr));
  });
}

affgeo_status affgeo_fixture_list(char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const auto dir = fixture_dir();
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
      if (entry.path().extension() == ".toml") names.push_back(entry.path().stem().string());
    if (ec) affgeo::fail(affgeo::ErrorKind::Io, "cannot list fixture directory '" + dir.string() + "'");
    std::sort(names.begin(), names.end());
    json arr = json::array();
    for (const auto& n : names) {
      json item{{"name", n}, {"path", (dir / (n + ".toml")).string()}};
      try {
        const auto sc = affgeo::load_scenario((dir / (n + ".toml")).string());
        item["description"] = sc.description;
        item["dimension"] = sc.spec.dim();
        item["has_family"] = sc.family.has_value();
      } catch (const std::exception& e) {
        item["load_error"] = e.what();
      }
      arr.push_back(std::move(item));
    }
    *out = dup(dump(json{{"fixture_dir", dir.string()}, {"fixtures", arr}}));
  });
}

affgeo_status affgeo_fixture_run(const char* name, const affgeo_run_options* options, char** report, int* exit_code) {
  return guarded([&] {
    require(name && report && exit_code, "null argument");
    const std::string n = name;
    if (n.empty() || n.find('/') != std::string::npos || n.find("..") != std::string::npos)
      throw affgeo::SchemaError("fixture", "invalid fixture name '" + n + "'");
    const auto path = fixture_dir() / (n + ".toml");
    if (!std::filesystem::exists(path)) affgeo::fail(affgeo::ErrorKind::Io, "no fixture named '" + n + "'");
    const auto sc = affgeo::load_scenario(path.string());
    const auto opt = to_options(options);
    json out{{"fixture", n}};
    const auto v = affgeo::run(sc, opt);
    out["verify"] = v.report;
    int code = v.exit_code;
    if (sc.family) {
      affgeo::RunOptions vopt = opt;
      vopt.checks.clear();
      const auto var = affgeo::run_variation(sc, *sc.family, vopt);
      out["variation"] = var.report;
      code = std::max(code, var.exit_code);
    }
    out["exit_code"] = code;
    *report = dup(dump(out));
    *exit_code = code;
  });
}

affgeo_status affgeo_error_report(const char* command, char** report, int* exit_code) {
  try {
    if (!report || !exit_code) return AFFGEO_ERR_INVALID_ARGUMENT;
    affgeo::RunResult r;
    if (g_last_exception) {
      try {
        std::rethrow_exception(g_last_exception);
      } catch (const std::invalid_argument& e) {
        r = affgeo::error_result(command ? command : "", e);
        r.exit_code = affgeo::kExitSchema;
        r.report["exit_code"] = r.exit_code;
      } catch (const std::exception& e) {
        r = affgeo::error_result(command ? command : "", e);
      }
    } else {
      r = affgeo::error_result(command ? command : "", std::runtime_error("no error recorded"));
    }
    *report = dup(dump(r.report));
    *exit_code = r.exit_code;
    return AFFGEO_OK;
  } catch (...) {
    return AFFGEO_ERR_INTERNAL;
  }
}

}  // extern "C"
