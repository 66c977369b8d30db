/* C interface to the bpv library. Every call returns a bpv_status; on failure
 * bpv_last_error() holds a message for the calling thread. Objects are opaque
 * handles released with the matching *_free function. Strings returned through
 * char** are owned by the caller and released with bpv_string_free. */
#ifndef BPV_BPV_H
#define BPV_BPV_H

#include <stddef.h>
#include <stdint.h>

#if defined(BPV_BUILDING_LIBRARY)
#define BPV_API __attribute__((visibility("default")))
#else
#define BPV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bpv_status {
  BPV_OK = 0,
  BPV_INVALID_ARGUMENT = 1,
  BPV_DOMAIN = 2,
  BPV_NO_CONVERGENCE = 3,
  BPV_PARSE = 4,
  BPV_IO = 5,
  BPV_INTERNAL = 6
} bpv_status;

typedef struct bpv_norm bpv_norm;
typedef struct bpv_grid bpv_grid;
typedef struct bpv_profile bpv_profile;   /* radial profile rho -> h */
typedef struct bpv_vprofile bpv_vprofile; /* ball volume profile rho -> Vol */

BPV_API const char* bpv_version(void);
BPV_API const char* bpv_last_error(void);
BPV_API const char* bpv_status_name(bpv_status status);
BPV_API void bpv_string_free(char* s);

/* Bessel functions and zeros */
typedef struct bpv_rayleigh {
  double partial, tail, extrapolated, tail_bound;
} bpv_rayleigh;

typedef struct bpv_mittag_leffler {
  double value, partial, tail, tail_bound;
  int terms;
} bpv_mittag_leffler;

BPV_API bpv_status bpv_bessel_j(double order, double t, double* out);
BPV_API bpv_status bpv_bessel_j_prime(double order, double t, double* out);
BPV_API bpv_status bpv_bessel_zero(double order, int k, double* out);
/* Writes zeros j_{order,1..count} into out[0..count-1]. */
BPV_API bpv_status bpv_zero_table(double order, int count, double* out);
BPV_API bpv_status bpv_rayleigh_sum(double order, int K, bpv_rayleigh* out);
BPV_API bpv_status bpv_mittag_leffler_ratio(double order, double t, int K, bpv_mittag_leffler* out);
BPV_API bpv_status bpv_omega(int n, double* out);

/* Norms */
BPV_API bpv_status bpv_norm_euclidean(int n, bpv_norm** out);
BPV_API bpv_status bpv_norm_lp(int n, double p, double kappa, bpv_norm** out);
/* matrix: n*n row-major, or NULL for the identity */
BPV_API bpv_status bpv_norm_quadratic(int n, const double* matrix, double kappa, bpv_norm** out);
BPV_API bpv_status bpv_norm_mix(int n, double p, const double* matrix, double w_lp, double kappa, bpv_norm** out);
BPV_API bpv_status bpv_norm_from_json(const char* text, bpv_norm** out);
BPV_API bpv_status bpv_norm_read_file(const char* path, bpv_norm** out);
BPV_API bpv_status bpv_norm_to_json(const bpv_norm* norm, char** out);
BPV_API void bpv_norm_free(bpv_norm* norm);
BPV_API bpv_status bpv_norm_dim(const bpv_norm* norm, int* out);
BPV_API bpv_status bpv_norm_eval(const bpv_norm* norm, const double* x, double* out);
BPV_API bpv_status bpv_norm_polar(const bpv_norm* norm, const double* xi, double* out);
BPV_API bpv_status bpv_norm_unit_ball_volume(const bpv_norm* norm, double* value, double* error);
/* New handle with kappa rescaled so the unit ball has volume omega_n. */
BPV_API bpv_status bpv_norm_normalize(const bpv_norm* norm, bpv_norm** out);
BPV_API bpv_status bpv_norm_uniformity(const bpv_norm* norm, int sample_budget, double* out);

/* Grid functions */
BPV_API bpv_status bpv_grid_centered(int n, const int* shape, double h, bpv_grid** out);
BPV_API bpv_status bpv_grid_parse(const char* text, bpv_grid** out);
BPV_API bpv_status bpv_grid_read_file(const char* path, bpv_grid** out);
BPV_API bpv_status bpv_grid_write_file(const bpv_grid* grid, const char* path);
BPV_API bpv_status bpv_grid_format(const bpv_grid* grid, char** out);
BPV_API void bpv_grid_free(bpv_grid* grid);
BPV_API bpv_status bpv_grid_dim(const bpv_grid* grid, int* out);
BPV_API bpv_status bpv_grid_spacing(const bpv_grid* grid, double* out);
BPV_API bpv_status bpv_grid_shape(const bpv_grid* grid, int* shape);
/* Pointer to the row-major cell values, valid until the grid is freed. */
BPV_API bpv_status bpv_grid_values(bpv_grid* grid, double** values, size_t* count);
BPV_API bpv_status bpv_grid_center(const bpv_grid* grid, size_t flat, double* x);

/* Rearrangement */
typedef struct bpv_rearrange_report {
  double mass_in, mass_out, hardy_in, hardy_out, dirichlet_in, dirichlet_out, slack;
  int cavalieri, hardy_littlewood, polya_szego;
} bpv_rearrange_report;

BPV_API bpv_status bpv_symmetrize(const bpv_grid* grid, const bpv_norm* norm, bpv_grid** out);
BPV_API bpv_status bpv_rearrange_report_run(const bpv_grid* grid, const bpv_norm* norm, double slack_constant,
                                            bpv_rearrange_report* out);
BPV_API bpv_status bpv_discrete_mass(const bpv_grid* grid, double* out);
BPV_API bpv_status bpv_discrete_hardy(const bpv_grid* grid, const bpv_norm* norm, double* out);
BPV_API bpv_status bpv_discrete_dirichlet(const bpv_grid* grid, const bpv_norm* norm, double* out);
BPV_API bpv_status bpv_hardy_inequality_check(const bpv_grid* grid, const bpv_norm* norm, double* out);

/* Radial profiles and the sharp constant */
BPV_API bpv_status bpv_profile_create(const double* rho, const double* h, size_t count, bpv_profile** out);
BPV_API void bpv_profile_free(bpv_profile* profile);
BPV_API bpv_status bpv_profile_data(const bpv_profile* profile, const double** rho, const double** h, size_t* count);
BPV_API bpv_status bpv_profile_grading(const bpv_profile* profile, double* out);

typedef struct bpv_bpv_report {
  double lhs, hardy_term, poincare_term, margin, sharp_constant, slack, scale;
  int pass, below_admissible_range;
  double uniformity, alpha_lower, alpha_upper;
} bpv_bpv_report;

BPV_API bpv_status bpv_sharp_constant(double alpha, int n, double volume, double* out);
/* grading <= 0 selects the default */
BPV_API bpv_status bpv_extremal_profile(double alpha, int n, double R, int M, double grading, bpv_profile** out);
BPV_API bpv_status bpv_extremal_origin_constant(double alpha, int n, double R, double* out);
BPV_API bpv_status bpv_euler_lagrange_residual(const bpv_profile* profile, double alpha, int n, double Q,
                                               double* out);
BPV_API bpv_status bpv_radial_rayleigh_quotient(const bpv_profile* profile, double alpha, int n, double* out);
BPV_API bpv_status bpv_radial_eigen_min(double alpha, int n, double R, int M, double grading, double* mu,
                                        int* iterations, bpv_profile** minimizer);
BPV_API bpv_status bpv_verify_bpv_grid(const bpv_grid* grid, const bpv_norm* norm, double alpha,
                                       double domain_volume, double slack_constant, bpv_bpv_report* out);

/* Volume profiles and rigidity */
typedef enum bpv_verdict { BPV_VERDICT_FLAT = 0, BPV_VERDICT_BPV_VIOLATED = 1 } bpv_verdict;

typedef struct bpv_verdict_report {
  bpv_verdict verdict;
  double functional, tolerance, max_deviation, t0;
} bpv_verdict_report;

typedef struct bpv_h_alpha_zero {
  double t0, value;
  int sign_changes;
} bpv_h_alpha_zero;

/* euclid | scaled:c | table:<file> | sphere:R | deficit-linear:a:s | deficit-power:a:s:k | deficit-step:a:s */
BPV_API bpv_status bpv_vprofile_parse(int n, const char* text, bpv_vprofile** out);
BPV_API void bpv_vprofile_free(bpv_vprofile* vp);
BPV_API bpv_status bpv_vprofile_describe(const bpv_vprofile* vp, char** out);
BPV_API bpv_status bpv_vprofile_volume(const bpv_vprofile* vp, double rho, double* out);
BPV_API bpv_status bpv_h_alpha(double alpha, int n, double t, double* out);
BPV_API bpv_status bpv_h_alpha_zero_find(double alpha, int n, bpv_h_alpha_zero* out);
BPV_API bpv_status bpv_integral_identity(double alpha, int n, double* out);
/* which in {1,2,3}; beta is used by which = 1 only */
BPV_API bpv_status bpv_monotone_check(int which, double alpha, int n, double beta, double* out);
BPV_API bpv_status bpv_rigidity_functional(const bpv_vprofile* vp, double alpha, int n, double r, double* out);
BPV_API bpv_status bpv_rigidity_verdict(const bpv_vprofile* vp, double alpha, int n, double r,
                                        bpv_verdict_report* out);

/* Singular elliptic problem on the unit ball */
typedef struct bpv_pde_problem {
  double alpha;
  int n;
  double p, lambda;
} bpv_pde_problem;

typedef struct bpv_pde_result {
  double energy, residual;
  int nonzero, inconclusive, attempts, converged_attempts, collapsed_attempts;
  char status[160];
} bpv_pde_result;

typedef struct bpv_necessity {
  double lhs, rhs, relative_error;
} bpv_necessity;

BPV_API bpv_status bpv_pde_solve(const bpv_pde_problem* prob, int M, double grading, int attempts, uint64_t seed,
                                 bpv_pde_result* out, bpv_profile** profile);
BPV_API bpv_status bpv_pde_residual(const bpv_pde_problem* prob, const bpv_profile* h, int nonlinear, double* out);
BPV_API bpv_status bpv_pde_energy(const bpv_pde_problem* prob, const bpv_profile* h, double* out);
BPV_API bpv_status bpv_coercivity_constant(const bpv_pde_problem* prob, double lF, double* out);
BPV_API bpv_status bpv_necessity_identity(const bpv_pde_problem* prob, const bpv_profile* u, bpv_necessity* out);
BPV_API bpv_status bpv_nonnegativity_projection(const bpv_profile* h, bpv_profile** out);

/* Invariant suite; report is JSON. */
BPV_API bpv_status bpv_selftest(uint64_t seed, int* pass, char** report);

#ifdef __cplusplus
}
#endif

#endif
