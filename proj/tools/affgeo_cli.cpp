// Command-line front end; talks to the engine only through affgeo.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "affgeo.h"

namespace {

constexpr int kExitUsage = 2;

struct Common {
  std::string checks;
  int points = 0;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
  bool json = true;
};

void add_common(CLI::App* cmd, Common& c, bool with_checks) {
  if (with_checks) cmd->add_option("--checks", c.checks, "comma-separated check names, or 'all'");
  cmd->add_option("--points", c.points, "number of sample points")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "sampling seed");
  cmd->add_option("--threads", c.threads, "worker threads (default: available cores)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", c.out, "write the JSON report to this file instead of stdout");
  cmd->add_flag("--json", c.json, "JSON output (the only mode)");
}

affgeo_run_options options(const Common& c, const CLI::App* cmd) {
  affgeo_run_options o;
  affgeo_run_options_init(&o);
  o.checks = c.checks.empty() ? nullptr : c.checks.c_str();
  o.points = c.points;
  o.has_seed = cmd->count("--seed") > 0;
  o.seed = c.seed;
  o.threads = c.threads;
  return o;
}

int emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f || !(f << text)) {
    std::fprintf(stderr, "cannot write %s\n", out.c_str());
    return 3;
  }
  return 0;
}

// Prints the report (or the error report) and returns the process status.
int finish(affgeo_status st, char* report, int code, const char* command, const std::string& out) {
  if (st != AFFGEO_OK) {
    char* err = nullptr;
    int ecode = 3;
    if (affgeo_error_report(command, &err, &ecode) == AFFGEO_OK) {
      emit(err, out);
      affgeo_string_free(err);
    }
    return ecode;
  }
  const int w = emit(report, out);
  affgeo_string_free(report);
  return w ? w : code;
}

std::string json_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '"': o += "\\\""; break;
      case '\\': o += "\\\\"; break;
      case '\n': o += "\\n"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          o += buf;
        } else {
          o += c;
        }
    }
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine-metric verification engine"};
  app.set_version_flag("--version", std::string("affgeo ") + affgeo_version());
  app.require_subcommand(1);

  Common vc;
  std::string scenario_path;
  auto* verify = app.add_subcommand("verify", "run identity and field-equation checks on a scenario");
  verify->add_option("--scenario", scenario_path, "scenario TOML file")->required();
  add_common(verify, vc, true);

  Common xc;
  std::string var_scenario, family_path;
  auto* variation = app.add_subcommand("variation", "first-variation checks for a deformation family");
  variation->add_option("--scenario", var_scenario, "scenario TOML file")->required();
  variation->add_option("--family", family_path, "family TOML file (default: the scenario's [family])");
  add_common(variation, xc, false);

  auto* fixtures = app.add_subcommand("fixtures", "built-in fixture scenarios");
  fixtures->require_subcommand(1);
  Common lc;
  auto* flist = fixtures->add_subcommand("list", "list fixtures");
  flist->add_option("--out", lc.out, "write the JSON listing to this file");
  flist->add_flag("--json", lc.json, "JSON output (the only mode)");
  Common rc;
  std::string fixture_name;
  auto* frun = fixtures->add_subcommand("run", "run a fixture");
  frun->add_option("name", fixture_name, "fixture name")->required();
  add_common(frun, rc, true);

  Common cc;
  auto* checks = app.add_subcommand("checks", "list registered checks");
  checks->add_flag("--json", cc.json, "JSON output (the only mode)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::printf("{\n  \"status\": \"error\",\n  \"error\": {\"kind\": \"Usage\", \"message\": \"%s\"},\n  \"exit_code\": %d\n}\n",
                json_escape(e.what()).c_str(), kExitUsage);
    return kExitUsage;
  }

  char* report = nullptr;
  int code = 0;
  if (*verify) {
    affgeo_scenario* sc = nullptr;
    affgeo_status st = affgeo_scenario_load(scenario_path.c_str(), &sc);
    if (st == AFFGEO_OK) {
      const auto o = options(vc, verify);
      st = affgeo_verify(sc, &o, &report, &code);
    }
    const int rcode = finish(st, report, code, "verify", vc.out);
    affgeo_scenario_free(sc);
    return rcode;
  }
  if (*variation) {
    affgeo_scenario* sc = nullptr;
    affgeo_family* fam = nullptr;
    affgeo_status st = affgeo_scenario_load(var_scenario.c_str(), &sc);
    if (st == AFFGEO_OK && !family_path.empty()) st = affgeo_family_load(family_path.c_str(), sc, &fam);
    if (st == AFFGEO_OK) {
      const auto o = options(xc, variation);
      st = affgeo_variation(sc, fam, &o, &report, &code);
    }
    const int rcode = finish(st, report, code, "variation", xc.out);
    affgeo_family_free(fam);
    affgeo_scenario_free(sc);
    return rcode;
  }
  if (*flist) {
    const affgeo_status st = affgeo_fixture_list(&report);
    return finish(st, report, 0, "fixtures list", lc.out);
  }
  if (*frun) {
    const auto o = options(rc, frun);
    const affgeo_status st = affgeo_fixture_run(fixture_name.c_str(), &o, &report, &code);
    return finish(st, report, code, "fixtures run", rc.out);
  }
  if (*checks) {
    const affgeo_status st = affgeo_check_list(&report);
    return finish(st, report, 0, "checks", "");
  }
  return kExitUsage;
}
