/* Vacuum free-boundary gas flow toolkit: C API.
 *
 * Every function returns a vfb_status; outputs are written through pointers
 * only on VFB_OK. On failure vfb_last_error() describes the problem for the
 * calling thread. Handles are opaque and owned by the caller via the
 * matching _destroy call. Handles are immutable after creation and may be
 * shared across threads.
 */
#ifndef VFB_H
#define VFB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vfb_status {
  VFB_OK = 0,
  VFB_ERR_DOMAIN = 1,    /* argument outside its mathematical domain */
  VFB_ERR_CONFIG = 2,    /* invalid configuration or malformed input file */
  VFB_ERR_NUMERICAL = 3, /* quadrature/integration failure */
  VFB_ERR_STATE = 4,     /* invalid evolution state (monotonicity lost, ...) */
  VFB_ERR_HORIZON = 5,   /* time horizon too short for the request */
  VFB_ERR_IO = 6,        /* file system failure */
  VFB_ERR_INTERNAL = 7   /* unexpected failure; please report */
} vfb_status;

/* Message for the most recent failure on this thread; never NULL. */
const char* vfb_last_error(void);

/* ---- gas parameters and the self-similar reference solution ---- */

typedef struct vfb_gas vfb_gas;

/* Requires gamma > 1 and mass > 0. */
vfb_status vfb_gas_create(double gamma, double mass, vfb_gas** out);
void vfb_gas_destroy(vfb_gas* gas);

/* Derived constants; any output pointer may be NULL to skip it. */
vfb_status vfb_gas_constants(const vfb_gas* gas, double* A, double* B,
                             double* half_width, double* alpha);

/* Reference density at (x, t); 0 outside the support. Requires t >= 0. */
vfb_status vfb_gas_density(const vfb_gas* gas, double x, double t, double* out);

/* Reference velocity x / ((gamma+1)(1+t)). Requires t >= 0. */
vfb_status vfb_gas_velocity(const vfb_gas* gas, double x, double t, double* out);

/* Support endpoints at time t. */
vfb_status vfb_gas_boundaries(const vfb_gas* gas, double t, double* x_minus,
                              double* x_plus);

/* Mass of the reference density at time t, by quadrature. */
vfb_status vfb_gas_total_mass(const vfb_gas* gas, double t, double* out);

/* ---- corrected stretch trajectory ---- */

typedef struct vfb_ansatz vfb_ansatz;

/* Integrates the correction ODE over [0, t_end].
 * Requires t_end > 0 and rel_tol in [1e-13, 1e-6]. */
vfb_status vfb_ansatz_create(const vfb_gas* gas, double t_end, double rel_tol,
                             vfb_ansatz** out);
void vfb_ansatz_destroy(vfb_ansatz* table);

/* Stretch and its first two derivatives at t in [0, t_end]; output pointers
 * may be NULL. */
vfb_status vfb_ansatz_eval(const vfb_ansatz* table, double t, double* eta_x,
                           double* eta_xt, double* eta_xtt);

/* Correction h = eta_x - (1+t)^{1/(gamma+1)} and its rate. */
vfb_status vfb_ansatz_correction(const vfb_ansatz* table, double t, double* h,
                                 double* h_t);

/* Max relative mismatch between the integrated trajectory and its
 * variation-of-constants representation. */
vfb_status vfb_ansatz_duhamel_residual(const vfb_ansatz* table, double* out);

/* Landmark times of the correction orbit. Fails with VFB_ERR_HORIZON when
 * t_end is too short for the orbit to relax. */
vfb_status vfb_ansatz_phase_portrait(const vfb_ansatz* table, double* t0,
                                     double* t1, double* t2,
                                     double* terminal_h);

/* Observed envelope constant sup_t eta_x / (1+t)^{1/(gamma+1)}. */
vfb_status vfb_ansatz_observed_k(const vfb_ansatz* table, double* out);

/* ---- scenario runs (configuration files) ---- */

/* Runs a full scenario described by a key = value config file and writes
 * the artifact bundle. exit_code: 0 all rate verdicts pass, 2 a verdict
 * failed, 3 a stage error (bundle marked failed). output_dir_override may
 * be NULL. */
vfb_status vfb_run_scenario(const char* config_path,
                            const char* output_dir_override, int* exit_code);

/* Correction-trajectory study only; writes ansatz.csv and
 * ansatz_summary.json. exit_code 0 on success. */
vfb_status vfb_run_ansatz(const char* config_path,
                          const char* output_dir_override, int* exit_code);

/* Re-reads a bundle and checks the stored report against a recomputation.
 * exit_code: 0 consistent and passing, 2 otherwise, 3 bundle marked failed. */
vfb_status vfb_verify_bundle(const char* bundle_dir, int* exit_code);

/* Log-log rate fit of one CSV column against the t column over
 * [t_lo, t_hi]. Output pointers may be NULL. */
vfb_status vfb_fit_csv(const char* csv_path, const char* column, double t_lo,
                       double t_hi, double* exponent, double* intercept,
                       double* r_squared, int* n_points);

/* Runs each config and writes one summary row per config to summary_csv.
 * exit_code: 0 all rows pass, 2 some verdict failed, 3 some stage errored. */
vfb_status vfb_sweep(const char* const* config_paths, size_t n_configs,
                     const char* summary_csv, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif /* VFB_H */
