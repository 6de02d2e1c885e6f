/* C interface to the fiber Hamiltonian toolkit.
 *
 * Every fallible call returns a cf_status. On failure a thread-local message
 * is available from cf_last_error() until the next call on the same thread.
 * Handles are opaque and must be released with the matching *_free function.
 * Strings returned by accessors stay valid for the lifetime of their handle.
 */
#ifndef CERENKOV_FIBER_H
#define CERENKOV_FIBER_H

#include <stddef.h>

#if defined(CF_BUILDING_LIBRARY)
#define CF_EXPORT __attribute__((visibility("default")))
#else
#define CF_EXPORT
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cf_status {
  CF_OK = 0,
  CF_ERR_INVALID_ARGUMENT = 1,
  CF_ERR_CONFIG = 2,
  CF_ERR_BUDGET = 3,
  CF_ERR_LOOKUP = 4,
  CF_ERR_SOLVER = 5,
  CF_ERR_RESONANT = 6,
  CF_ERR_EMPTY_WINDOW = 7,
  CF_ERR_IO = 8,
  CF_ERR_INTERNAL = 9
} cf_status;

typedef enum cf_cone_kind {
  CF_CONE_FORWARD = 0,
  CF_CONE_DOUBLE = 1,
  CF_CONE_COMPLEMENT = 2
} cf_cone_kind;

typedef struct cf_cone {
  double axis[3];
  cf_cone_kind kind;
  double plateau_cos;
  double support_cos;
} cf_cone;

typedef struct cf_config cf_config;
typedef struct cf_model cf_model;
typedef struct cf_result cf_result;

CF_EXPORT const char* cf_version(void);
CF_EXPORT const char* cf_last_error(void);
/* Stable machine-readable name, e.g. "solver_failure". */
CF_EXPORT const char* cf_status_name(cf_status status);

/* Configuration. */
CF_EXPORT cf_status cf_config_default(cf_config** out);
CF_EXPORT cf_status cf_config_parse(const char* json, cf_config** out);
CF_EXPORT cf_status cf_config_load(const char* path, cf_config** out);
CF_EXPORT void cf_config_free(cf_config* config);
CF_EXPORT const char* cf_config_fingerprint(const cf_config* config);
CF_EXPORT const char* cf_config_canonical(const cf_config* config);
/* 0 means "use the configured value". */
CF_EXPORT cf_status cf_config_set_threads(cf_config* config, size_t threads);

/* Grid, basis and cached operators built from a configuration. */
CF_EXPORT cf_status cf_model_create(const cf_config* config, cf_model** out);
CF_EXPORT void cf_model_free(cf_model* model);
CF_EXPORT size_t cf_model_dimension(const cf_model* model);
CF_EXPORT size_t cf_model_modes(const cf_model* model);
CF_EXPORT cf_status cf_model_ground_energy(const cf_model* model, const double P[3], double g,
                                           double* energy);

/* Experiments. Each produces a result holding a JSON record and, where the
 * command emits a table, CSV text. */
CF_EXPORT cf_status cf_run_spectrum(const cf_model* model, const double P[3], double g, size_t pairs,
                                    cf_result** out);
CF_EXPORT cf_status cf_run_scan(const cf_model* model, double p_min, double p_max, size_t steps,
                                double g, cf_result** out);
/* kappa may be INFINITY. shell = 0 selects the window residual; cone may be NULL. */
CF_EXPORT cf_status cf_run_virial(const cf_model* model, const double P[3], double g, double kappa,
                                  size_t shell, const cf_cone* cone, int perpendicular,
                                  cf_result** out);
/* energy = NAN selects P^2/2. */
CF_EXPORT cf_status cf_run_cerenkov(const double P[3], double energy, size_t thetas, cf_result** out);
CF_EXPORT cf_status cf_run_golden_rule(const cf_config* config, const double P[3], double g,
                                       cf_result** out);
CF_EXPORT cf_status cf_run_trial_scaling(const cf_config* config, const double P[3], double energy,
                                         double g, double eps_min, double eps_max, size_t points,
                                         cf_result** out);
/* half_width = NAN selects the automatic window. */
CF_EXPORT cf_status cf_run_overlap(const cf_model* model, const double P[3], double g,
                                   double half_width, cf_result** out);
CF_EXPORT cf_status cf_run_grid(const cf_config* config, cf_result** out);
CF_EXPORT cf_status cf_run_operator(const cf_model* model, const double P[3], double g,
                                    cf_result** out);
CF_EXPORT cf_status cf_run_weights(const cf_config* config, const cf_cone* cone, size_t samples,
                                   cf_result** out);

CF_EXPORT const char* cf_result_json(const cf_result* result);
CF_EXPORT const char* cf_result_csv(const cf_result* result);
CF_EXPORT size_t cf_result_failed_points(const cf_result* result);
CF_EXPORT size_t cf_result_warning_count(const cf_result* result);
CF_EXPORT const char* cf_result_warning(const cf_result* result, size_t index);
CF_EXPORT void cf_result_free(cf_result* result);

/* Scalar primitives. */
CF_EXPORT cf_status cf_form_factor(const cf_config* config, double r, double* value,
                                   double* derivative);
/* Writes up to two roots; *count receives how many exist. */
CF_EXPORT cf_status cf_resonance_roots(double P, double energy, double cos_theta, double roots[2],
                                       size_t* count);
/* *has_threshold is 0 when |P| <= 1. */
CF_EXPORT cf_status cf_cerenkov_threshold(double P, int* has_threshold, double* cos_theta);
CF_EXPORT cf_status cf_golden_rule_rate(const cf_config* config, double P, double g, double* rate);

#ifdef __cplusplus
}
#endif

#endif
