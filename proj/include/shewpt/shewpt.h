// Copyright 2026 The shewpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * C interface to the shewpt library: selective-harmonic-elimination solving
 * for cascaded H-bridge inverters, stepped-waveform spectra and THD, and the
 * series-series wireless power link (phasor and time-domain).
 *
 * Conventions
 *   - Every fallible call returns shewpt_status; SHEWPT_OK is 0. On failure
 *     shewpt_last_error() describes the problem and shewpt_last_error_field()
 *     names the offending input (empty when not applicable). Both are
 *     thread-local and valid until the next failing call on that thread.
 *   - Angles are radians unless the name ends in _deg.
 *   - Objects returned through an out pointer are owned by the caller and
 *     released with the matching *_free function. Passing NULL to *_free is
 *     a no-op.
 */
#ifndef SHEWPT_H
#define SHEWPT_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(SHEWPT_BUILDING)
#    define SHEWPT_API __declspec(dllexport)
#  else
#    define SHEWPT_API __declspec(dllimport)
#  endif
#else
#  define SHEWPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum shewpt_status {
  SHEWPT_OK = 0,
  SHEWPT_E_VALIDATION = 1,
  SHEWPT_E_DIMENSION = 2,
  SHEWPT_E_SINGULAR = 3,
  SHEWPT_E_DIVERGENCE = 4,
  SHEWPT_E_NONCONVERGENCE = 5,
  SHEWPT_E_COST = 6,
  SHEWPT_E_IO = 7,
  SHEWPT_E_INTERNAL = 99
} shewpt_status;

typedef struct shewpt_solution shewpt_solution;
typedef struct shewpt_solution_list shewpt_solution_list;
typedef struct shewpt_waveform shewpt_waveform;
typedef struct shewpt_spectrum shewpt_spectrum;
typedef struct shewpt_trace shewpt_trace;

SHEWPT_API const char* shewpt_version(void);
SHEWPT_API const char* shewpt_last_error(void);
SHEWPT_API const char* shewpt_last_error_field(void);
SHEWPT_API const char* shewpt_status_name(shewpt_status status);

/* ---- harmonic elimination ------------------------------------------------ */

/* out[k] = sum_i cos(orders[k] * angles[i]); requires n_angles == n_orders. */
SHEWPT_API shewpt_status shewpt_residual(const int* orders, size_t n_orders, const double* angles,
                                         size_t n_angles, double* out);
/* out is n_orders x n_orders, row-major. */
SHEWPT_API shewpt_status shewpt_jacobian(const int* orders, size_t n_orders, const double* angles,
                                         size_t n_angles, double* out);

/* Damped Newton. On SHEWPT_E_NONCONVERGENCE *out still receives the best
 * iterate (converged flag 0); on any other failure *out is NULL. */
SHEWPT_API shewpt_status shewpt_solve_newton(const int* orders, size_t n_orders,
                                             const double* initial, size_t n_initial, double tol,
                                             int max_iter, shewpt_solution** out);
SHEWPT_API shewpt_status shewpt_solve_multistart(const int* orders, size_t n_orders,
                                                 double grid_step_deg, double tol, int max_iter,
                                                 shewpt_solution_list** out);
/* window_center_deg may be NULL for an unrestricted search. */
SHEWPT_API shewpt_status shewpt_grid_oracle(const int* orders, size_t n_orders, double step_deg,
                                            const double* window_center_deg,
                                            double window_half_width_deg, double* out_deg);

SHEWPT_API size_t shewpt_solution_levels(const shewpt_solution* sol);
SHEWPT_API shewpt_status shewpt_solution_angles(const shewpt_solution* sol, double* out, size_t n);
SHEWPT_API shewpt_status shewpt_solution_angles_deg(const shewpt_solution* sol, double* out,
                                                    size_t n);
SHEWPT_API double shewpt_solution_residual_norm(const shewpt_solution* sol);
SHEWPT_API int shewpt_solution_iterations(const shewpt_solution* sol);
SHEWPT_API int shewpt_solution_converged(const shewpt_solution* sol);
/* CSV theta_index,theta_deg */
SHEWPT_API shewpt_status shewpt_solution_write_csv(const shewpt_solution* sol, const char* path);
SHEWPT_API void shewpt_solution_free(shewpt_solution* sol);

SHEWPT_API size_t shewpt_solution_list_size(const shewpt_solution_list* list);
/* Borrowed pointer, valid until the list is freed. NULL when out of range. */
SHEWPT_API const shewpt_solution* shewpt_solution_list_get(const shewpt_solution_list* list,
                                                           size_t index);
SHEWPT_API void shewpt_solution_list_free(shewpt_solution_list* list);

/* ---- stepped waveform ---------------------------------------------------- */

SHEWPT_API shewpt_status shewpt_waveform_create(const double* angles, size_t n, double step_voltage,
                                                double fundamental_hz, shewpt_waveform** out);
SHEWPT_API size_t shewpt_waveform_levels(const shewpt_waveform* w);
SHEWPT_API double shewpt_waveform_peak(const shewpt_waveform* w);
SHEWPT_API double shewpt_waveform_sample(const shewpt_waveform* w, double t);
/* Peak amplitude of the n-th sine harmonic, n >= 1. */
SHEWPT_API shewpt_status shewpt_waveform_harmonic(const shewpt_waveform* w, int n, double* out);
SHEWPT_API double shewpt_waveform_fundamental_rms(const shewpt_waveform* w);
SHEWPT_API double shewpt_waveform_total_rms(const shewpt_waveform* w);
/* cell_average != 0 gives exact per-sample means instead of point values. */
SHEWPT_API shewpt_status shewpt_waveform_sample_period(const shewpt_waveform* w, size_t count,
                                                       int cell_average, double* out);
/* CSV t_s,v_V with `samples` rows. */
SHEWPT_API shewpt_status shewpt_waveform_write_csv(const shewpt_waveform* w, size_t samples,
                                                   const char* path);
SHEWPT_API void shewpt_waveform_free(shewpt_waveform* w);

/* ---- spectrum ------------------------------------------------------------ */

typedef struct shewpt_thd_report {
  double thd_total;     /* closed form, untruncated */
  double thd_total_dft; /* DFT, orders 2..band_total */
  int band_total;
  double thd_21;
  double eliminated_orders_max_relative;
} shewpt_thd_report;

SHEWPT_API shewpt_status shewpt_spectrum_from_waveform(const shewpt_waveform* w, size_t samples,
                                                       int n_max, shewpt_spectrum** out);
SHEWPT_API shewpt_status shewpt_spectrum_from_samples(const double* samples, size_t count,
                                                      double fundamental_hz, int n_max,
                                                      int cell_average, shewpt_spectrum** out);
SHEWPT_API shewpt_status shewpt_spectrum_analytic(const shewpt_waveform* w, int n_max,
                                                  shewpt_spectrum** out);
SHEWPT_API int shewpt_spectrum_n_max(const shewpt_spectrum* s);
SHEWPT_API double shewpt_spectrum_fundamental_hz(const shewpt_spectrum* s);
SHEWPT_API shewpt_status shewpt_spectrum_amplitude(const shewpt_spectrum* s, int n, double* out);
SHEWPT_API shewpt_status shewpt_spectrum_thd(const shewpt_spectrum* s, int n_max, double* out);
/* CSV n,f_Hz,amp_V,rel_to_fund */
SHEWPT_API shewpt_status shewpt_spectrum_write_csv(const shewpt_spectrum* s, const char* path);
SHEWPT_API void shewpt_spectrum_free(shewpt_spectrum* s);

SHEWPT_API shewpt_status shewpt_thd_closed_form(const shewpt_waveform* w, double* out);
SHEWPT_API shewpt_status shewpt_thd_report_compute(const shewpt_waveform* w,
                                                   const int* eliminated_orders, size_t n_orders,
                                                   size_t samples, shewpt_thd_report* out);

/* ---- wireless power link ------------------------------------------------- */

typedef struct shewpt_link_params {
  double L1_H, L2_H, C1_F, C2_F, k;
  double R1_ohm, R2_ohm, R_load_ohm;
  double V_dc_V, f_s_Hz, diode_drop_V;
} shewpt_link_params;

typedef struct shewpt_fha_result {
  double I1_re, I1_im, I2_re, I2_im; /* RMS phasors, A */
  double V1_rms;                     /* drive fundamental, V (real phasor) */
  double Z_in_re, Z_in_im;
  double R_ac;
  double V_out_dc;
  double P_out, P_in;
  int zvs_favorable;
} shewpt_fha_result;

SHEWPT_API void shewpt_link_params_reference(double V_dc, shewpt_link_params* out);
SHEWPT_API shewpt_status shewpt_link_params_load(const char* path, shewpt_link_params* out);
SHEWPT_API shewpt_status shewpt_link_params_validate(const shewpt_link_params* p);

SHEWPT_API shewpt_status shewpt_mutual_inductance(double k, double L1, double L2, double* out);
SHEWPT_API shewpt_status shewpt_resonant_frequency(double L, double C, double* out);
SHEWPT_API shewpt_status shewpt_equivalent_ac_load(double R_load_dc, double* out);
SHEWPT_API shewpt_status shewpt_drive_fundamental_rms(double V_dc, double* out);
SHEWPT_API shewpt_status shewpt_fha_solve(const shewpt_link_params* p, shewpt_fha_result* out);
SHEWPT_API shewpt_status shewpt_power_scaling(const shewpt_link_params* p, double V_dc_a,
                                              double V_dc_b, double* out);
SHEWPT_API shewpt_status shewpt_fha_write_json(const shewpt_fha_result* r, const char* path);

/* ---- transient simulation ------------------------------------------------ */

typedef struct shewpt_tank_state {
  double i1, i2, vC1, vC2;
} shewpt_tank_state;

typedef struct shewpt_metrics {
  double I1_rms, I2_rms, I1_fundamental_rms;
  double P_out, P_in;
  double i1_at_rising_edge_max;
  int rising_edges;
  int zvs;
} shewpt_metrics;

SHEWPT_API shewpt_status shewpt_simulate_square(const shewpt_link_params* p, int steps_per_cycle,
                                                int n_cycles, shewpt_trace** out);
/* The waveform's fundamental must equal p->f_s_Hz. */
SHEWPT_API shewpt_status shewpt_simulate_stepped(const shewpt_link_params* p,
                                                 const shewpt_waveform* w, int steps_per_cycle,
                                                 int n_cycles, shewpt_trace** out);
SHEWPT_API size_t shewpt_trace_size(const shewpt_trace* t);
SHEWPT_API double shewpt_trace_dt(const shewpt_trace* t);
SHEWPT_API int shewpt_trace_cycles(const shewpt_trace* t);
SHEWPT_API double shewpt_trace_snapping_error(const shewpt_trace* t);
SHEWPT_API shewpt_status shewpt_trace_state(const shewpt_trace* t, size_t index,
                                            shewpt_tank_state* out, double* drive_out);
SHEWPT_API shewpt_status shewpt_steady_state_metrics(const shewpt_trace* t, int settle_cycles,
                                                     shewpt_metrics* out);
/* *out = -1 when the run never settles. */
SHEWPT_API shewpt_status shewpt_settle_cycle(const shewpt_trace* t, int* out);
/* CSV t_s,v_drive_V,i1_A,i2_A,vC1_V,vC2_V */
SHEWPT_API shewpt_status shewpt_trace_write_csv(const shewpt_trace* t, const char* path);
SHEWPT_API void shewpt_trace_free(shewpt_trace* t);

#ifdef __cplusplus
}
#endif

#endif /* SHEWPT_H */
