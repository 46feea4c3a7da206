/*
 * Copyright 2026 The sparsense Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libsparsense: greedy sparse recovery with a coherence-based
 * blind stopping rule, the matching closed-form bounds, and the Monte Carlo
 * figure harness.
 *
 * Every fallible call returns sps_status. On failure a message describing
 * the problem is available from sps_last_error() on the calling thread until
 * the next failing call. Handles are opaque and owned by the caller.
 */

#ifndef SPARSENSE_SPARSENSE_H
#define SPARSENSE_SPARSENSE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SPARSENSE_BUILDING_LIBRARY)
#    define SPS_API __declspec(dllexport)
#  else
#    define SPS_API __declspec(dllimport)
#  endif
#else
#  define SPS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sps_status {
  SPS_OK = 0,
  SPS_ERR_INVALID_ARGUMENT = 1,
  SPS_ERR_DIMENSION_MISMATCH = 2,
  SPS_ERR_RANK_DEFICIENT = 3,
  SPS_ERR_INFEASIBLE_PARAMS = 4,
  SPS_ERR_INFEASIBLE_TARGET = 5,
  SPS_ERR_ZERO_RESIDUAL = 6,
  SPS_ERR_ZERO_SIGNAL = 7,
  SPS_ERR_IO = 8,
  SPS_ERR_FORMAT = 9,
  SPS_ERR_CONFIG = 10,
  SPS_ERR_INTERNAL = 100
} sps_status;

SPS_API const char* sps_version(void);
SPS_API const char* sps_status_name(sps_status status);
/* Never NULL; empty when the thread has seen no failure. */
SPS_API const char* sps_last_error(void);

/* ---- Measurement matrices ------------------------------------------------ */

typedef struct sps_matrix sps_matrix;

/* Entries i.i.d. N(0, 1/rows), columns renormalized to unit length. */
SPS_API sps_status sps_matrix_gaussian(int64_t rows, int64_t cols, uint64_t seed, sps_matrix** out);
/* Column i is n_i + c_i * 1 with c_i ~ U[0, offset_max], then normalized. */
SPS_API sps_status sps_matrix_hybrid(int64_t rows, int64_t cols, double offset_max, uint64_t seed,
                                     sps_matrix** out);
/* Copies rows*cols column-major doubles; every column must have unit norm. */
SPS_API sps_status sps_matrix_from_data(int64_t rows, int64_t cols, const double* column_major,
                                        sps_matrix** out);
SPS_API sps_status sps_matrix_load(const char* path, sps_matrix** out);
SPS_API sps_status sps_matrix_save(const sps_matrix* matrix, const char* path);
SPS_API sps_status sps_matrix_save_csv(const sps_matrix* matrix, const char* path);
/* threads = 0 uses every core. The value is cached on the handle. */
SPS_API sps_status sps_matrix_coherence(const sps_matrix* matrix, unsigned threads, double* out);
SPS_API sps_status sps_matrix_dims(const sps_matrix* matrix, int64_t* rows, int64_t* cols);
/* Column-major view valid until the handle is freed. */
SPS_API const double* sps_matrix_data(const sps_matrix* matrix);
SPS_API void sps_matrix_free(sps_matrix* matrix);

/* ---- Recovery ------------------------------------------------------------ */

typedef enum sps_algorithm {
  SPS_ALG_BOLS = 0,
  SPS_ALG_OLS = 1,
  SPS_ALG_OMP = 2,
  SPS_ALG_BOMP = 3,
  SPS_ALG_COSAMP = 4,
  SPS_ALG_MOLS = 5
} sps_algorithm;

SPS_API sps_status sps_algorithm_parse(const char* name, sps_algorithm* out);
SPS_API const char* sps_algorithm_name(sps_algorithm algorithm);

typedef struct sps_recover_options {
  sps_algorithm algorithm;
  int k;                      /* sparsity for ols, omp, cosamp, mols */
  double omega_star;          /* blind rule: stop when |D^T r|_inf / |r|_2 <= omega_star * mu */
  double mu;                  /* negative: use the matrix coherence */
  int max_iterations;         /* blind cap; 0: floor(rows / 2) */
  int mols_width;             /* atoms per MOLS round */
  int cosamp_max_iterations;
} sps_recover_options;

SPS_API void sps_recover_options_init(sps_recover_options* options);

typedef struct sps_result sps_result;

SPS_API sps_status sps_recover(const sps_matrix* matrix, const double* y, int64_t y_len,
                               const sps_recover_options* options, sps_result** out);
SPS_API int64_t sps_result_length(const sps_result* result);
SPS_API const double* sps_result_x(const sps_result* result);
/* Indices in selection order. */
SPS_API int64_t sps_result_support_size(const sps_result* result);
SPS_API const int64_t* sps_result_support(const sps_result* result);
SPS_API int sps_result_iterations(const sps_result* result);
SPS_API const char* sps_result_stop_reason(const sps_result* result);
/* |y| followed by the residual norm after each iteration. */
SPS_API int64_t sps_result_history_size(const sps_result* result);
SPS_API const double* sps_result_history(const sps_result* result);
SPS_API void sps_result_free(sps_result* result);

/* ---- Blind threshold ----------------------------------------------------- */

typedef struct sps_blind_info {
  double mu;
  double C;
  double theta;
  double ceiling;
  double omega;
  double omega_star;
  double threshold;
  int max_iterations;
  double rho_upper;
  int rho_in_valid_range;
} sps_blind_info;

/* omega_override and c_override: NaN means derive from theory. */
SPS_API sps_status sps_blind_setup(const sps_matrix* matrix, double p_min, double rho, double omega_override,
                                   double c_override, sps_blind_info* out);

/* ---- Closed-form bounds -------------------------------------------------- */

typedef struct sps_theory_params {
  int M;
  int N;
  double mu;
  double rho;
  int K;
  double C; /* NaN: use the surrogate (1 + 1/mu) / 2 */
  double p_min;
} sps_theory_params;

SPS_API sps_status sps_theory_singular_bounds(int K, int M, double rho, double* lower, double* upper,
                                              double* prob_floor);
SPS_API sps_status sps_theory_mapping_inflation(int K, int M, double mu, double rho, double* out);
SPS_API sps_status sps_theory_mapping_singular(int K, int M, double mu, double rho, double* out);
SPS_API sps_status sps_theory_mapping_coherence(int K, double mu, double* out);
SPS_API sps_status sps_theory_mapping_gram(int K, double mu, double* out);
SPS_API sps_status sps_theory_tight_slack_limit(int K, int M, double mu, double* out);
SPS_API sps_status sps_theory_reconstructible_sparsity(double mu, double* out);
SPS_API sps_status sps_theory_theta(double M, double C, double* a1, double* a2, double* theta);
SPS_API sps_status sps_theory_ceiling(const sps_theory_params* params, double* out);
SPS_API sps_status sps_theory_probability(const sps_theory_params* params, double omega, double* out);
SPS_API sps_status sps_theory_omega(const sps_theory_params* params, double* out);
/* Linear-scale floors; any output pointer may be NULL. */
SPS_API sps_status sps_theory_snr_min(const sps_theory_params* params, double omega, double* phi1, double* phi2,
                                      double* bound);

/* ---- Synthetic measurements ---------------------------------------------- */

/* Draws a K-sparse x with N(mean, var) nonzeros and y = Dx + noise at snr_db
 * (INFINITY for none). x_out holds cols doubles, y_out rows doubles. */
SPS_API sps_status sps_synthesize(const sps_matrix* matrix, int K, double mean, double var, double snr_db,
                                  uint64_t seed, double* x_out, double* y_out, double* sigma_out);

/* ---- Experiments and plots ----------------------------------------------- */

typedef enum sps_line_kind { SPS_LINE_SUMMARY = 0, SPS_LINE_WARNING = 1, SPS_LINE_FILE = 2 } sps_line_kind;
typedef void (*sps_line_callback)(sps_line_kind kind, const char* line, void* user);

/* Runs a figure preset. overrides are "key=value" strings; config_path NULL
 * selects the built-in presets. */
SPS_API sps_status sps_experiment_run(const char* figure, const char* scale, const char* config_path,
                                      const char* const* overrides, size_t override_count, const char* out_dir,
                                      unsigned threads, sps_line_callback callback, void* user);
/* Reports each preset name through the callback as a summary line. */
SPS_API sps_status sps_experiment_list(const char* config_path, sps_line_callback callback, void* user);

/* Long-format files (with an algorithm column) plot `metric`; wide files plot
 * every column starting with `prefix`. NULL strings take defaults. */
SPS_API sps_status sps_plot_csv(const char* csv_path, const char* svg_path, const char* metric, const char* prefix,
                                const char* title, const char* x_label, const char* y_label, int log_y);

/* Parses "start:step:stop" or a comma list into out[0..capacity). *count
 * receives the full grid length even when it exceeds capacity. */
SPS_API sps_status sps_parse_grid(const char* text, double* out, size_t capacity, size_t* count);

#ifdef __cplusplus
}
#endif

#endif /* SPARSENSE_SPARSENSE_H */
