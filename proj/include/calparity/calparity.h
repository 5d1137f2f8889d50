/*
 * Copyright 2026 The calparity Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of libcalparity.
 *
 * Objects are opaque handles created by cp_*_load / cp_*_create / cp_run_*
 * functions and released with the matching cp_*_free. Every fallible call
 * returns a cp_status; on failure a human-readable message is available from
 * cp_last_error() on the same thread until the next failing call. Borrowed
 * strings (const char* results) live as long as the handle they came from.
 */

#ifndef CALPARITY_CALPARITY_H_
#define CALPARITY_CALPARITY_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CALPARITY_BUILDING_LIBRARY)
#    define CP_API __declspec(dllexport)
#  else
#    define CP_API __declspec(dllimport)
#  endif
#else
#  define CP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cp_status {
  CP_OK = 0,
  CP_ERROR_INVALID_ARGUMENT = 1,
  CP_ERROR_PARSE = 2,
  CP_ERROR_IO = 3,
  CP_ERROR_INFEASIBLE = 4,
  CP_ERROR_DEGENERATE = 5,
  CP_ERROR_INTERNAL = 6
} cp_status;

CP_API const char* cp_last_error(void);
CP_API const char* cp_status_name(cp_status status);
CP_API const char* cp_version(void);

/* ---------------------------------------------------------------- data -- */

typedef struct cp_dataset cp_dataset;

CP_API cp_status cp_dataset_load_csv(const char* path, cp_dataset** out);
CP_API cp_status cp_dataset_parse_csv(const char* text, size_t length, cp_dataset** out);
/* Rows are grouped by id in order of first appearance. */
CP_API cp_status cp_dataset_create(const char* const* group_ids, const double* scores,
                                   const int* labels, size_t n, cp_dataset** out);
CP_API void cp_dataset_free(cp_dataset* ds);

CP_API size_t cp_dataset_group_count(const cp_dataset* ds);
/* NULL when index is out of range. */
CP_API const char* cp_dataset_group_id(const cp_dataset* ds, size_t group);
CP_API size_t cp_dataset_group_size(const cp_dataset* ds, size_t group);
CP_API cp_status cp_dataset_write_csv(const cp_dataset* ds, const char* path);

typedef enum cp_score_family {
  CP_SCORES_POINT_MASS = 0,  /* param_a = p */
  CP_SCORES_GRID = 1,        /* grid / grid_length */
  CP_SCORES_KUMARASWAMY = 2  /* param_a, param_b */
} cp_score_family;

typedef struct cp_synth_group {
  const char* id;
  size_t n;
  cp_score_family family;
  double param_a;
  double param_b;
  const double* grid;
  size_t grid_length;
  double miscalibration_shift;
} cp_synth_group;

/* Group k is drawn with seed split from `seed` by index k. */
CP_API cp_status cp_dataset_synthesize(const cp_synth_group* groups, size_t count, uint64_t seed,
                                       cp_dataset** out);

/* ------------------------------------------------------------- metrics -- */

typedef struct cp_rate_point {
  double fp;
  double fn;
} cp_rate_point;

typedef enum cp_binning_kind { CP_BINNING_EXACT = 0, CP_BINNING_FIXED = 1 } cp_binning_kind;

typedef struct cp_binning {
  cp_binning_kind kind;
  size_t bins;
} cp_binning;

CP_API cp_status cp_group_base_rate(const cp_dataset* ds, size_t group, double* out);
CP_API cp_status cp_group_rate_point(const cp_dataset* ds, size_t group, cp_rate_point* out);
CP_API cp_status cp_group_analytic_rates(const cp_dataset* ds, size_t group, cp_rate_point* out);
CP_API cp_status cp_group_calibration_gap(const cp_dataset* ds, size_t group, cp_binning binning,
                                          double* out);
CP_API cp_status cp_group_linearity_residual(const cp_dataset* ds, size_t group, double* out);

/* ---------------------------------------------------------------- cost -- */

typedef struct cp_cost_spec {
  double a;
  double b;
} cp_cost_spec;

CP_API cp_status cp_cost(cp_rate_point point, cp_cost_spec spec, double* out);
CP_API cp_status cp_trivial_cost(double mu, cp_cost_spec spec, double* out);
CP_API cp_status cp_weighted_cost_spec(double r_fp, double r_fn, double mu, cp_cost_spec* out);

/* ------------------------------------------------- equal-cost withholding -- */

typedef enum cp_feasibility_reason {
  CP_REASON_OK = 0,
  CP_REASON_COST_ORDER_VIOLATED = 1,
  CP_REASON_EXCEEDS_TRIVIAL = 2
} cp_feasibility_reason;

typedef struct cp_feasibility_verdict {
  int feasible;
  double g1_cost;
  double g2_cost;
  double trivial2_cost;
  cp_feasibility_reason reason;
} cp_feasibility_verdict;

CP_API cp_status cp_feasibility(double g1_cost, double g2_cost, double trivial2_cost,
                                cp_feasibility_verdict* out);
/* CP_ERROR_INFEASIBLE or CP_ERROR_DEGENERATE (already trivial) on failure. */
CP_API cp_status cp_compute_alpha(double g1_cost, double g2_cost, double trivial2_cost, double* out);

typedef enum cp_mixture_mode { CP_MODE_DETERMINISTIC = 0, CP_MODE_MONTE_CARLO = 1 } cp_mixture_mode;

typedef struct cp_interpolation_plan {
  double alpha;
  double trivial_output;
  cp_mixture_mode mode;
  uint64_t seed;
} cp_interpolation_plan;

CP_API cp_status cp_mixture_rate_point(const cp_dataset* ds, size_t group,
                                       cp_interpolation_plan plan, cp_rate_point* out);
CP_API cp_status cp_mixture_calibration_gap(const cp_dataset* ds, size_t group,
                                            cp_interpolation_plan plan, double* out);
/* Writes one 0/1 entry per sample of the group into `withheld` (length must be
 * cp_dataset_group_size). */
CP_API cp_status cp_withholding_mask(const cp_dataset* ds, size_t group, cp_interpolation_plan plan,
                                     uint8_t* withheld, size_t length);

/* ------------------------------------------------------ equalized odds -- */

typedef struct cp_flip_rates {
  double n2p;
  double p2n;
} cp_flip_rates;

typedef struct cp_eo_solution {
  cp_flip_rates group1;
  cp_flip_rates group2;
  cp_rate_point rates1;
  cp_rate_point rates2;
  double objective;
  int optimal; /* 0 when the constraint system is infeasible */
} cp_eo_solution;

CP_API cp_status cp_derived_rates(const cp_dataset* ds, size_t group, cp_flip_rates q,
                                  cp_rate_point* out);
CP_API cp_status cp_solve_eo(const cp_dataset* ds, size_t group1, size_t group2,
                             cp_eo_solution* out);
CP_API cp_status cp_eo_calibration_damage(const cp_dataset* ds, size_t group, cp_flip_rates q,
                                          double* out);

/* ------------------------------------------------------- impossibility -- */

typedef struct cp_impossibility_bound {
  double max_entry;
  uint64_t denominator;
  double constant;
  double delta_cal;
  double delta_cost;
  double rate_bound;
} cp_impossibility_bound;

/* pair[0]/pair[1] are the costs of groups 1/2 under the first constraint,
 * pair_prime likewise for the second. `matrix` (optional, row-major 4x4)
 * receives the constraint matrix. */
CP_API cp_status cp_build_matrix(double mu1, double mu2, const cp_cost_spec pair[2],
                                 const cp_cost_spec pair_prime[2], double* matrix, int* distinct);
CP_API cp_status cp_approximate_bound(double mu1, double mu2, const cp_cost_spec pair[2],
                                      const cp_cost_spec pair_prime[2], double delta_cal,
                                      double delta_cost, double max_entry, uint64_t denominator,
                                      cp_impossibility_bound* out);

/* ------------------------------------------------------------- reports -- */

typedef enum cp_cost_form { CP_COST_NONE = 0, CP_COST_EXPLICIT = 1, CP_COST_WEIGHTED = 2 } cp_cost_form;

typedef struct cp_run_options {
  const char* group1; /* NULL: first group in file order */
  cp_cost_form cost_form;
  double cost[4]; /* a1,b1,a2,b2 or r_fp,r_fn */
  cp_cost_form cost2_form;
  double cost2[4];
  cp_binning binning;
  cp_mixture_mode mode;
  int has_seed;
  uint64_t seed;
  double tol;
  int has_max_entry;
  double max_entry;
  uint64_t denominator; /* 0: not asserted */
  int has_delta_cal;
  double delta_cal;
  int has_delta_cost;
  double delta_cost;
  int with_postprocess;
} cp_run_options;

typedef struct cp_report cp_report;

CP_API void cp_run_options_init(cp_run_options* opt);

CP_API cp_status cp_run_stats(const cp_dataset* ds, const cp_run_options* opt, cp_report** out);
CP_API cp_status cp_run_calibrate_check(const cp_dataset* ds, const cp_run_options* opt,
                                        cp_report** out);
CP_API cp_status cp_run_postprocess_calibrated(const cp_dataset* ds, const cp_run_options* opt,
                                               cp_report** out);
CP_API cp_status cp_run_postprocess_eo(const cp_dataset* ds, const cp_run_options* opt,
                                       cp_report** out);
CP_API cp_status cp_run_diagnose(const cp_dataset* ds, const cp_run_options* opt, cp_report** out);
CP_API cp_status cp_run_plot_data(const cp_dataset* ds, const cp_run_options* opt, cp_report** out);

/* Pretty-printed JSON document. */
CP_API const char* cp_report_json(const cp_report* report);
/* 1 when the run completed but the instance has no solution. */
CP_API int cp_report_infeasible(const cp_report* report);
CP_API int cp_report_has_output(const cp_report* report);
/* CSV text of the output table, or NULL. */
CP_API const char* cp_report_output_csv(const cp_report* report);
CP_API cp_status cp_report_write_output(const cp_report* report, const char* path);
CP_API void cp_report_free(cp_report* report);

#ifdef __cplusplus
}
#endif

#endif /* CALPARITY_CALPARITY_H_ */
