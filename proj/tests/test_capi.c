/* Exercises the shared library through the C header only. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "affgeo.h"

static int failures = 0;

#define EXPECT(cond)                                            \
  do {                                                          \
    if (!(cond)) {                                              \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                               \
    }                                                           \
  } while (0)

static const char* sphere =
    "[chart]\n"
    "coords = [\"phi\", \"psi\"]\n"
    "signature = [1, 1]\n"
    "region = [[0.3, 2.8], [0, 6]]\n"
    "[metric]\n"
    "diagonal = [\"1\", \"sin(phi)^2\"]\n"
    "[sampling]\n"
    "points = 5\n"
    "seed = 1\n"
    "[checks]\n"
    "names = [\"scalar_curvature\"]\n"
    "[checks.target]\n"
    "scalar_curvature = 2\n";

static const char* flat_xdy =
    "[chart]\n"
    "coords = [\"t\", \"x\", \"y\", \"z\"]\n"
    "signature = [1, 1, 1, 1]\n"
    "region = [[-1, 1], [-1, 1], [-1, 1], [-1, 1]]\n"
    "[metric]\n"
    "diagonal = [\"1\", \"1\", \"1\", \"1\"]\n"
    "[potential]\n"
    "a_flat = [\"0\", \"0\", \"x\", \"0\"]\n"
    "[sampling]\n"
    "seed = 1\n";

int main(void) {
  affgeo_scenario* sc = NULL;
  affgeo_run_options opt;
  char* report = NULL;
  int code = -1;
  double r = 0.0, s = 0.0, hat = 0.0;
  const double p2[2] = {1.0, 0.5};
  const double p4[4] = {0.1, 0.2, 0.3, 0.4};

  EXPECT(strlen(affgeo_version()) > 0);

  EXPECT(affgeo_scenario_parse(sphere, "s2", &sc) == AFFGEO_OK);
  EXPECT(affgeo_scenario_dimension(sc) == 2);
  EXPECT(affgeo_scenario_has_family(sc) == 0);

  affgeo_run_options_init(&opt);
  opt.threads = 2;
  EXPECT(affgeo_verify(sc, &opt, &report, &code) == AFFGEO_OK);
  EXPECT(code == 0);
  EXPECT(report && strstr(report, "\"status\": \"pass\""));
  affgeo_string_free(report);
  report = NULL;

  EXPECT(affgeo_evaluate_check(sc, "scalar_curvature", p2, 2, &r, &s) == AFFGEO_OK);
  EXPECT(r < 1e-12);
  EXPECT(affgeo_evaluate_check(sc, "scalar_curvature", p2, 3, &r, &s) == AFFGEO_ERR_DIMENSION);
  EXPECT(affgeo_evaluate_check(sc, "no_such_check", p2, 2, &r, &s) != AFFGEO_OK);
  EXPECT(strlen(affgeo_last_error()) > 0);

  opt.checks = "nope";
  EXPECT(affgeo_verify(sc, &opt, &report, &code) == AFFGEO_ERR_SCHEMA);
  EXPECT(affgeo_error_report("verify", &report, &code) == AFFGEO_OK);
  EXPECT(code == 2);
  EXPECT(report && strstr(report, "nope"));
  affgeo_string_free(report);
  report = NULL;
  affgeo_scenario_free(sc);
  sc = NULL;

  EXPECT(affgeo_scenario_parse(flat_xdy, NULL, &sc) == AFFGEO_OK);
  EXPECT(affgeo_hat_scalar(sc, p4, 4, &hat) == AFFGEO_OK);
  EXPECT(hat > -0.5 - 1e-12 && hat < -0.5 + 1e-12);
  affgeo_scenario_free(sc);
  sc = NULL;

  EXPECT(affgeo_scenario_parse("[chart\n", NULL, &sc) == AFFGEO_ERR_PARSE);
  EXPECT(sc == NULL);
  EXPECT(affgeo_scenario_load("/nonexistent/scenario.toml", &sc) == AFFGEO_ERR_IO);
  EXPECT(affgeo_scenario_parse(NULL, NULL, &sc) == AFFGEO_ERR_INVALID_ARGUMENT);
  EXPECT(affgeo_variation(NULL, NULL, NULL, &report, &code) == AFFGEO_ERR_INVALID_ARGUMENT);

  EXPECT(affgeo_check_list(&report) == AFFGEO_OK);
  EXPECT(report && strstr(report, "first_bianchi"));
  affgeo_string_free(report);
  report = NULL;

  EXPECT(affgeo_fixture_list(&report) == AFFGEO_OK);
  EXPECT(report && strstr(report, "schwarzschild"));
  affgeo_string_free(report);
  report = NULL;
  EXPECT(affgeo_fixture_run("../etc/passwd", NULL, &report, &code) == AFFGEO_ERR_SCHEMA);
  EXPECT(affgeo_fixture_run("sphere2", NULL, &report, &code) == AFFGEO_OK);
  EXPECT(code == 0);
  affgeo_string_free(report);

  affgeo_scenario_free(NULL);
  affgeo_family_free(NULL);
  affgeo_string_free(NULL);

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
