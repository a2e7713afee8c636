#ifndef AFFGEO_H
#define AFFGEO_H

/* C interface to the affine-metric verification engine.
 *
 * Every call returns an affgeo_status; on failure the message is available
 * from affgeo_last_error() on the same thread. Strings returned through
 * char** out-parameters are owned by the caller and released with
 * affgeo_string_free(). Reports are JSON documents. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AFFGEO_API __declspec(dllexport)
#else
#define AFFGEO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum affgeo_status {
  AFFGEO_OK = 0,
  AFFGEO_ERR_PARSE = 1,
  AFFGEO_ERR_SCHEMA = 2,
  AFFGEO_ERR_VALIDATION = 3,
  AFFGEO_ERR_IO = 4,
  AFFGEO_ERR_DOMAIN = 5,
  AFFGEO_ERR_SINGULAR_METRIC = 6,
  AFFGEO_ERR_DEGENERATE_FAMILY = 7,
  AFFGEO_ERR_DIMENSION = 8,
  AFFGEO_ERR_INVALID_ARGUMENT = 9,
  AFFGEO_ERR_INTERNAL = 10
} affgeo_status;

typedef struct affgeo_scenario affgeo_scenario;
typedef struct affgeo_family affgeo_family;

typedef struct affgeo_run_options {
  const char* checks; /* comma-separated names, "all", or NULL for the scenario's list */
  int points;         /* <= 0: scenario value */
  int has_seed;       /* nonzero: use seed below */
  uint64_t seed;
  int threads;        /* <= 0: hardware concurrency */
} affgeo_run_options;

AFFGEO_API const char* affgeo_version(void);
AFFGEO_API const char* affgeo_last_error(void);
AFFGEO_API void affgeo_string_free(char* s);
AFFGEO_API void affgeo_run_options_init(affgeo_run_options* options);

AFFGEO_API affgeo_status affgeo_scenario_load(const char* path, affgeo_scenario** out);
AFFGEO_API affgeo_status affgeo_scenario_parse(const char* toml, const char* id, affgeo_scenario** out);
AFFGEO_API void affgeo_scenario_free(affgeo_scenario* scenario);
AFFGEO_API int affgeo_scenario_dimension(const affgeo_scenario* scenario);
AFFGEO_API int affgeo_scenario_has_family(const affgeo_scenario* scenario);

AFFGEO_API affgeo_status affgeo_family_load(const char* path, const affgeo_scenario* scenario, affgeo_family** out);
AFFGEO_API void affgeo_family_free(affgeo_family* family);

/* Runs the scenario's checks; *report receives the JSON report and
 * *exit_code 0 (all pass), 1 (check failure) or 3 (evaluation error). */
AFFGEO_API affgeo_status affgeo_verify(const affgeo_scenario* scenario, const affgeo_run_options* options,
                                       char** report, int* exit_code);
/* family may be NULL to use the scenario's [family] table. */
AFFGEO_API affgeo_status affgeo_variation(const affgeo_scenario* scenario, const affgeo_family* family,
                                          const affgeo_run_options* options, char** report, int* exit_code);

/* Single check at one point: largest absolute residual entry and its scale.
 * Value checks compare against the scenario's target for that check, else 0. */
AFFGEO_API affgeo_status affgeo_evaluate_check(const affgeo_scenario* scenario, const char* check,
                                               const double* point, size_t n, double* residual, double* scale);
/* R̂ at one point. */
AFFGEO_API affgeo_status affgeo_hat_scalar(const affgeo_scenario* scenario, const double* point, size_t n,
                                           double* out);

/* JSON array of registered check names and summaries. */
AFFGEO_API affgeo_status affgeo_check_list(char** json);

/* Fixture library: directory from $AFFGEO_FIXTURE_DIR or the build default. */
AFFGEO_API affgeo_status affgeo_fixture_list(char** json);
AFFGEO_API affgeo_status affgeo_fixture_run(const char* name, const affgeo_run_options* options, char** report,
                                            int* exit_code);

/* JSON error report for the last failure on this thread, with the exit code
 * the CLI uses for it (2 schema/parse/validation, 3 runtime). */
AFFGEO_API affgeo_status affgeo_error_report(const char* command, char** report, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif
