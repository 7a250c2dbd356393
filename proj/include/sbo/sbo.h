/* C interface to the dephasing indicator library. */
#ifndef SBO_SBO_H
#define SBO_SBO_H

#include <stddef.h>

#if defined(_WIN32)
#  ifdef SBO_BUILDING_LIBRARY
#    define SBO_API __declspec(dllexport)
#  else
#    define SBO_API __declspec(dllimport)
#  endif
#else
#  define SBO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sbo_status {
  SBO_OK = 0,
  SBO_ERR_INVALID_ARGUMENT = 1, /* null handle, bad parameter, domain error */
  SBO_ERR_NUMERICAL = 2,        /* quadrature or truncation failure */
  SBO_ERR_OUT_OF_RANGE = 3,     /* index past the end of a result */
  SBO_ERR_INTERNAL = 4
} sbo_status;

typedef enum sbo_cut {
  SBO_CUT_UNCUT = 0,
  SBO_CUT_SINGLE = 1, /* observed [0, beta] */
  SBO_CUT_WINDOW = 2, /* observed [alpha, beta] */
  SBO_CUT_SOFT = 3    /* logistic flanks of width sigma; alpha = 0 gives one flank */
} sbo_cut;

typedef enum sbo_role { SBO_OBSERVED = 0, SBO_UNOBSERVED = 1 } sbo_role;

typedef struct sbo_model sbo_model;
typedef struct sbo_nm_result sbo_nm_result;

typedef struct sbo_params {
  double s;           /* ohmicity, > 0 */
  double cutoff;      /* Lambda, > 0 */
  double temperature; /* >= 0 */
  sbo_cut cut;
  double alpha;
  double beta;
  double sigma;
} sbo_params;

typedef struct sbo_quad_options {
  double rel_tol;
  double abs_tol;
  int max_depth;
} sbo_quad_options;

/* Library version, e.g. "0.3.0". */
SBO_API const char* sbo_version(void);
/* Message of the last failing call on this thread ("" if none). */
SBO_API const char* sbo_last_error(void);

SBO_API void sbo_quad_options_default(sbo_quad_options* out);

SBO_API sbo_status sbo_model_create(const sbo_params* params, sbo_model** out);
SBO_API void sbo_model_destroy(sbo_model* model);
SBO_API sbo_status sbo_model_set_quad(sbo_model* model, const sbo_quad_options* opts);

/* Indicators by quadrature. */
SBO_API sbo_status sbo_log_decoherence(const sbo_model* m, double t, sbo_role role,
                                       double* out);
SBO_API sbo_status sbo_log_fidelity(const sbo_model* m, double t, sbo_role role,
                                    double* out);
SBO_API sbo_status sbo_gamma_rate(const sbo_model* m, double t, sbo_role role,
                                  double* out);
SBO_API sbo_status sbo_gamma_rate_high_temperature(const sbo_model* m, double t,
                                                   sbo_role role, double* out);

/* Closed forms; uncut partition and s > 1 only. */
SBO_API sbo_status sbo_closed_log_decoherence(const sbo_model* m, double t, double* out);
SBO_API sbo_status sbo_closed_log_fidelity(const sbo_model* m, double t, double* out);
SBO_API sbo_status sbo_closed_gamma_rate(const sbo_model* m, double t, double* out);

/* t -> infinity limits; *divergent is set to 1 and *out to -inf when the
 * integral does not converge. */
SBO_API sbo_status sbo_asymptotic_log_decoherence(const sbo_model* m, sbo_role role,
                                                  double* out, int* divergent);
SBO_API sbo_status sbo_asymptotic_log_fidelity(const sbo_model* m, sbo_role role,
                                               double* out, int* divergent);

/* Non-Markovianity measure of the unobserved rate. t_max <= 0 selects
 * 50 / cutoff; grid_points == 0 selects the default. high_temperature != 0
 * uses the high-temperature rate. */
SBO_API sbo_status sbo_non_markovianity(const sbo_model* m, double t_max,
                                        size_t grid_points, int high_temperature,
                                        sbo_nm_result** out);
SBO_API void sbo_nm_result_destroy(sbo_nm_result* r);
SBO_API double sbo_nm_value(const sbo_nm_result* r);
SBO_API double sbo_nm_doubled_horizon_value(const sbo_nm_result* r);
SBO_API int sbo_nm_converged(const sbo_nm_result* r);
SBO_API size_t sbo_nm_interval_count(const sbo_nm_result* r);
SBO_API sbo_status sbo_nm_interval(const sbo_nm_result* r, size_t i, double* start,
                                   double* end);
SBO_API size_t sbo_nm_diagnostic_count(const sbo_nm_result* r);
SBO_API const char* sbo_nm_diagnostic(const sbo_nm_result* r, size_t i);

/* Oracle checks. */

/* Midpoint discretisation of the role's weighted density into n_modes on
 * (0, omega_max] (omega_max <= 0 selects the default), then per-mode
 * products at time t. */
SBO_API sbo_status sbo_oracle_product_indicators(const sbo_model* m, sbo_role role,
                                                 size_t n_modes, double omega_max,
                                                 double t, double* log_dec,
                                                 double* log_fid);

/* Uhlmann fidelity of D(+a) rho_th D(+a)^dag and D(-a) rho_th D(-a)^dag in a
 * truncated Fock space, alongside the closed form exp(-2|a|^2 / (2 nbar + 1)). */
SBO_API sbo_status sbo_oracle_mode_fidelity(double nbar, double alpha_re,
                                            double alpha_im, int cutoff,
                                            double* fock, double* closed);

/* Partially reduced state for a qubit in |+> with the given observed and
 * unobserved modes (frequency/coupling arrays) at time t. Reports the
 * validity errors of the state and the SBS diagnostics. fock_cutoff <= 0
 * selects the per-mode default. */
typedef struct sbo_state_report {
  double hermiticity_error;
  double trace_error;
  int positive;
  double coherence_norm;
  double conditional_overlap;
  double product_overlap; /* product of per-mode fidelities */
  double decoherence_factor;
  int dimension;
} sbo_state_report;

SBO_API sbo_status sbo_oracle_state(const double* obs_omega, const double* obs_g,
                                    size_t n_obs, const double* unobs_omega,
                                    const double* unobs_g, size_t n_unobs,
                                    double temperature, double t, int fock_cutoff,
                                    sbo_state_report* out);

/* Central-difference master-equation residual for the same setup. */
SBO_API sbo_status sbo_oracle_master_residual(const double* obs_omega,
                                              const double* obs_g, size_t n_obs,
                                              const double* unobs_omega,
                                              const double* unobs_g, size_t n_unobs,
                                              double temperature, double t, double dt,
                                              int fock_cutoff, double* out);

#ifdef __cplusplus
}
#endif

#endif
