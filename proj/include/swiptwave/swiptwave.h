/* SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the swiptwave library. Everything behind the opaque
 * handles is immutable once created; handles may be read from any thread,
 * but a handle must not be freed while another call is using it.
 */
#ifndef SWIPTWAVE_H
#define SWIPTWAVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SWIPT_API __declspec(dllexport)
#else
#define SWIPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum swipt_status {
  SWIPT_OK = 0,
  SWIPT_ERR_INVALID_ARGUMENT = 1,
  SWIPT_ERR_PARSE = 2,          /* malformed scenario/design file */
  SWIPT_ERR_INFEASIBLE = 3,     /* rate floor above the achievable maximum */
  SWIPT_ERR_DIMENSION = 4,      /* shapes do not match the scenario */
  SWIPT_ERR_IO = 5,             /* file could not be read or written */
  SWIPT_ERR_INTERNAL = 6
} swipt_status;

/* Termination state of an optimization run or sweep point. */
typedef enum swipt_run_status {
  SWIPT_RUN_OPTIMAL = 0,
  SWIPT_RUN_MAX_ITERATIONS = 1,
  SWIPT_RUN_INFEASIBLE = 2
} swipt_run_status;

SWIPT_API const char* swipt_version(void);
SWIPT_API const char* swipt_status_name(swipt_status status);
SWIPT_API const char* swipt_run_status_name(swipt_run_status status);

/* Detail message for the most recent failing call on this thread. */
SWIPT_API const char* swipt_last_error(void);

typedef struct swipt_scenario swipt_scenario;
typedef struct swipt_design swipt_design;
typedef struct swipt_result swipt_result;
typedef struct swipt_region swipt_region;
typedef struct swipt_oracle_report swipt_oracle_report;
typedef struct swipt_check_table swipt_check_table;

/* ---- scenarios ---------------------------------------------------- */

SWIPT_API swipt_status swipt_scenario_load(const char* path, swipt_scenario** out);
SWIPT_API swipt_status swipt_scenario_parse(const char* text, swipt_scenario** out);
SWIPT_API void swipt_scenario_free(swipt_scenario* scenario);

SWIPT_API int swipt_scenario_num_tones(const swipt_scenario* scenario);
SWIPT_API int swipt_scenario_num_antennas(const swipt_scenario* scenario);
SWIPT_API double swipt_scenario_power_budget(const swipt_scenario* scenario);
/* Water-filling rate bound in bits per symbol (decoder fed the full
 * received power). */
SWIPT_API double swipt_scenario_max_rate(const swipt_scenario* scenario);

/* ---- run options --------------------------------------------------- */

typedef struct swipt_options {
  double epsilon;          /* relative convergence threshold */
  int max_iterations;
  double rate_floor_bits;
  double freeze_rho;       /* splitting ratio to solve at; < 0 leaves it free */
  int wit_only;            /* nonzero: drop the deterministic power waveform */
  int sweep_points;        /* boundary sample count for swipt_sweep */
  int independent_points;  /* nonzero: sweep points run without warm starts */
  uint64_t seed;
} swipt_options;

/* Fills the documented defaults (epsilon 1e-6, 100 iterations, free rho,
 * 20 sweep points, seed 1). */
SWIPT_API void swipt_options_init(swipt_options* options);

/* ---- optimize ------------------------------------------------------ */

SWIPT_API swipt_status swipt_optimize(const swipt_scenario* scenario,
                                      const swipt_options* options, swipt_result** out);
SWIPT_API void swipt_result_free(swipt_result* result);

SWIPT_API swipt_run_status swipt_result_status(const swipt_result* result);
SWIPT_API double swipt_result_zdc(const swipt_result* result);
SWIPT_API double swipt_result_rate(const swipt_result* result);
SWIPT_API double swipt_result_rho(const swipt_result* result);
SWIPT_API int swipt_result_iterations(const swipt_result* result);
/* Copies up to `cap` trajectory values; returns the full count. */
SWIPT_API int swipt_result_trajectory(const swipt_result* result, double* buffer, int cap);
SWIPT_API swipt_status swipt_result_design(const swipt_result* result, swipt_design** out);

/* ---- designs ------------------------------------------------------- */

typedef enum swipt_matrix_kind {
  SWIPT_MATRIX_POWER_AMPLITUDES = 0,
  SWIPT_MATRIX_INFO_AMPLITUDES = 1,
  SWIPT_MATRIX_POWER_PHASES = 2,
  SWIPT_MATRIX_INFO_PHASES = 3
} swipt_matrix_kind;

SWIPT_API void swipt_design_free(swipt_design* design);
SWIPT_API int swipt_design_num_tones(const swipt_design* design);
SWIPT_API int swipt_design_num_antennas(const swipt_design* design);
SWIPT_API double swipt_design_rho(const swipt_design* design);
/* Row-major tones x antennas; buffer must hold the full matrix. */
SWIPT_API swipt_status swipt_design_matrix(const swipt_design* design, swipt_matrix_kind kind,
                                           double* buffer, size_t cap);
SWIPT_API swipt_status swipt_design_save(const swipt_design* design, const char* path);
SWIPT_API swipt_status swipt_design_load(const char* path, swipt_design** out);

/* ---- sweep --------------------------------------------------------- */

SWIPT_API swipt_status swipt_sweep(const swipt_scenario* scenario, const swipt_options* options,
                                   swipt_region** out);
SWIPT_API void swipt_region_free(swipt_region* region);
SWIPT_API int swipt_region_size(const swipt_region* region);
SWIPT_API swipt_status swipt_region_point(const swipt_region* region, int index,
                                          double* rate_bits, double* zdc, double* rho,
                                          int* iterations, swipt_run_status* status);

/* ---- time-domain oracle -------------------------------------------- */

SWIPT_API swipt_status swipt_oracle(const swipt_scenario* scenario, const swipt_design* design,
                                    uint64_t num_symbols, uint64_t seed,
                                    swipt_oracle_report** out);
SWIPT_API void swipt_oracle_report_free(swipt_oracle_report* report);
SWIPT_API double swipt_oracle_analytic(const swipt_oracle_report* report);
SWIPT_API double swipt_oracle_estimate(const swipt_oracle_report* report);
SWIPT_API double swipt_oracle_std_error(const swipt_oracle_report* report);
SWIPT_API int swipt_oracle_carrier_multiple(const swipt_oracle_report* report);
SWIPT_API double swipt_oracle_sample_rate(const swipt_oracle_report* report);
SWIPT_API int swipt_oracle_samples_per_period(const swipt_oracle_report* report);
/* Nonzero when the estimate sits within three standard errors of the
 * analytic value. */
SWIPT_API int swipt_oracle_within_three_sigma(const swipt_oracle_report* report);

/* ---- validation battery -------------------------------------------- */

SWIPT_API swipt_status swipt_validate(const swipt_scenario* scenario, uint64_t seed,
                                      swipt_check_table** out);
SWIPT_API void swipt_check_table_free(swipt_check_table* table);
SWIPT_API int swipt_check_table_size(const swipt_check_table* table);
SWIPT_API const char* swipt_check_name(const swipt_check_table* table, int index);
SWIPT_API int swipt_check_passed(const swipt_check_table* table, int index);
SWIPT_API const char* swipt_check_detail(const swipt_check_table* table, int index);

#ifdef __cplusplus
}
#endif

#endif /* SWIPTWAVE_H */
