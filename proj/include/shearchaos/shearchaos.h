#ifndef SHEARCHAOS_SHEARCHAOS_H
#define SHEARCHAOS_SHEARCHAOS_H

/* C interface to the shear-induced chaos library: closed-form Lyapunov
 * exponents of the noisy limit-cycle model on the cylinder
 *
 *   dy     = -alpha y dt + sigma sum_i f_i(theta) o dW_i
 *   dtheta = (1 + b y) dt
 *
 * plus Monte Carlo, time-average and Fokker-Planck estimators, a pullback
 * sampler and parameter sweeps. All functions return a status; on failure
 * shc_last_error() describes the problem for the calling thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SHC_BUILDING_LIBRARY)
#    define SHC_API __declspec(dllexport)
#  else
#    define SHC_API __declspec(dllimport)
#  endif
#else
#  define SHC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum shc_status {
  SHC_OK = 0,
  SHC_INVALID_INPUT = 1,
  SHC_NON_CONVERGENCE = 2,
  SHC_DEGENERATE_NOISE = 3,
  SHC_BRACKET_FAILURE = 4,
  SHC_NON_FINITE_STATE = 5,
  SHC_SINGULAR_DISCRETIZATION = 6,
  SHC_IO_FAILURE = 7,
  SHC_INTERNAL = 8
} shc_status;

typedef enum shc_coupling {
  SHC_COUPLING_TENT = 0,  /* f(theta) = dist(theta, 0), one driver */
  SHC_COUPLING_TRIG = 1,  /* cos(2 pi theta)/2pi, sin(2 pi theta)/2pi, two drivers */
  SHC_COUPLING_SINE4 = 2  /* four-segment piecewise-linear sine, one driver */
} shc_coupling;

typedef enum shc_regime {
  SHC_RANDOM_EQUILIBRIUM = 0,
  SHC_CRITICAL = 1,
  SHC_RANDOM_STRANGE_ATTRACTOR = 2
} shc_regime;

typedef enum shc_format { SHC_FORMAT_CSV = 0, SHC_FORMAT_JSON = 1, SHC_FORMAT_SVG = 2 } shc_format;

typedef enum shc_sweep_mode {
  SHC_SWEEP_ANALYTIC = 0,
  SHC_SWEEP_MONTE_CARLO = 1,
  SHC_SWEEP_BOTH = 2
} shc_sweep_mode;

typedef struct shc_params {
  double alpha;
  double b;
  double sigma;
} shc_params;

typedef struct shc_mc_config {
  double T;
  double dt;
  int n_traj;
  uint64_t seed;
} shc_mc_config;

typedef struct shc_estimate {
  double value;
  double std_error;
  long n_samples;
  double horizon;
  double dt;
  int insufficient_horizon;
} shc_estimate;

typedef struct shc_sweep_row {
  double alpha;
  double b;
  double sigma;
  double lambda1;
  double lambda2;
  double sigma0;
  const char* regime; /* owned by the sweep handle */
  const char* method;
  const char* error;  /* "" when the row succeeded */
} shc_sweep_row;

typedef struct shc_sweep_spec {
  const double* alpha;
  size_t n_alpha;
  const double* b;
  size_t n_b;
  const double* sigma;
  size_t n_sigma;
  shc_sweep_mode mode;
  uint64_t seed;
  shc_mc_config mc;
  shc_coupling coupling;
  double tol; /* quadrature tolerance, <= 0 for the default */
} shc_sweep_spec;

typedef struct shc_density shc_density;
typedef struct shc_pullback shc_pullback;
typedef struct shc_sweep shc_sweep;

SHC_API const char* shc_version(void);
SHC_API const char* shc_last_error(void);
SHC_API const char* shc_status_name(shc_status status);

/* T = 2000, dt = 1e-3, n_traj = 64, seed = 1 */
SHC_API shc_mc_config shc_mc_config_default(void);

/* ---- closed form ------------------------------------------------------- */

/* Root of the sign function G; tol <= 0 returns the cached default-accuracy value. */
SHC_API shc_status shc_c0(double tol, double* out);
SHC_API shc_status shc_sign_function(double c, double* out);
SHC_API shc_status shc_sigma0(double alpha, double b, double* out);
/* tol <= 0 uses the default quadrature tolerance (1e-10). error may be NULL. */
SHC_API shc_status shc_lyapunov_pair(shc_params p, double tol, double* lambda1, double* lambda2,
                                     double* error);
SHC_API shc_status shc_lambda1_rescaled(shc_params p, double tol, double* out);
SHC_API shc_status shc_density_m(shc_params p, double v, double* out);
/* tol <= 0 uses 1e-7. lambda1 and sigma0 may be NULL; sigma0 is inf for b = 0. */
SHC_API shc_status shc_classify(shc_params p, double tol, shc_regime* regime, double* lambda1,
                                double* sigma0);
SHC_API const char* shc_regime_name(shc_regime regime);
SHC_API shc_status shc_q_integrand(shc_params p, double phi, double* out);

/* Writes sigma0(alpha_i, b) into out[i]. */
SHC_API shc_status shc_bifurcation_curve(const double* alpha, size_t n, double b, double* out);
/* path NULL or "-" writes to stdout. SVG is not available for curves. */
SHC_API shc_status shc_bifurcation_write(const double* alpha, size_t n, double b,
                                         const char* path, shc_format format);

/* ---- estimators -------------------------------------------------------- */

/* config NULL uses shc_mc_config_default(). sum12 may be NULL. */
SHC_API shc_status shc_mc_lyapunov(shc_params p, shc_coupling c, const shc_mc_config* config,
                                   shc_estimate* lambda1, shc_estimate* sum12);
SHC_API shc_status shc_fk_time_average(shc_params p, shc_coupling c, const shc_mc_config* config,
                                       shc_estimate* out);
/* transformed != 0 integrates the linear system in the rescaled chart. */
SHC_API shc_status shc_mc_reduced(shc_params p, int transformed, const shc_mc_config* config,
                                  shc_estimate* out);

/* Stationary density of the projective angle on n + 1 nodes of [0, pi]. */
SHC_API shc_status shc_density_solve(shc_params p, int n, shc_density** out);
SHC_API void shc_density_free(shc_density* d);
SHC_API size_t shc_density_size(const shc_density* d);
SHC_API const double* shc_density_phi(const shc_density* d);
SHC_API const double* shc_density_values(const shc_density* d);
SHC_API double shc_density_flux(const shc_density* d);
SHC_API double shc_density_mass(const shc_density* d);
SHC_API shc_status shc_density_lambda1(const shc_density* d, double* out);
SHC_API shc_status shc_density_write(const shc_density* d, const char* path, shc_format format);

/* Cloud of n_points initial conditions driven by one noise path; the diameter
 * is recorded every sample_interval time units (<= 0 for 1). */
SHC_API shc_status shc_pullback_run(shc_params p, shc_coupling c, int n_points, double T,
                                    double dt, uint64_t seed, double sample_interval,
                                    shc_pullback** out);
SHC_API void shc_pullback_free(shc_pullback* r);
SHC_API size_t shc_pullback_size(const shc_pullback* r);
SHC_API const double* shc_pullback_times(const shc_pullback* r);
SHC_API const double* shc_pullback_diameters(const shc_pullback* r);
SHC_API double shc_pullback_final_diameter(const shc_pullback* r);
SHC_API shc_status shc_pullback_write(const shc_pullback* r, const char* path, shc_format format);

/* Single trajectory with tangent vector, CSV t,y,theta,v_y,v_theta,log_norm. */
SHC_API shc_status shc_simulate_trajectory(shc_params p, shc_coupling c, double y0, double theta0,
                                           double T, double dt, int sample_every, uint64_t seed,
                                           const char* path);

/* ---- sweeps ------------------------------------------------------------ */

SHC_API shc_status shc_sweep_run(const shc_sweep_spec* spec, shc_sweep** out);
SHC_API shc_status shc_sweep_read_json(const char* path, shc_sweep** out);
SHC_API void shc_sweep_free(shc_sweep* s);
SHC_API size_t shc_sweep_size(const shc_sweep* s);
SHC_API shc_status shc_sweep_get_row(const shc_sweep* s, size_t i, shc_sweep_row* out);
/* Number of (alpha, b) slices whose quadrature signs along sigma are not (-)*0?(+)*. */
SHC_API shc_status shc_sweep_sign_violations(const shc_sweep* s, double zero_tol, size_t* count);
SHC_API shc_status shc_sweep_write(const shc_sweep* s, const char* path, shc_format format);

#ifdef __cplusplus
}
#endif

#endif
