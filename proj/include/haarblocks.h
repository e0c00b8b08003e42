/* haarblocks C API
 *
 * Flat extern-C surface over the haarblocks library: Haar/Stiefel sampling,
 * exact block densities and marginal tails, approximation audits, deviation
 * rate functions, and the JSON-configured experiment harness.
 *
 * Conventions:
 *   - every function returns an hb_status; HB_OK (0) means success,
 *   - on failure hb_last_error() returns a thread-local description,
 *   - matrices are dense row-major double buffers allocated by the caller,
 *   - experiment reports are opaque handles released with hb_report_free.
 */

#ifndef HAARBLOCKS_H
#define HAARBLOCKS_H

#include <stdint.h>

#if defined(_WIN32)
#define HB_API __declspec(dllexport)
#else
#define HB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hb_status {
  HB_OK = 0,
  HB_ERROR_INVALID_ARGUMENT = 1, /* dimension or validation failure */
  HB_ERROR_DOMAIN = 2,           /* argument outside a mathematical domain */
  HB_ERROR_NUMERIC = 3,          /* solver or quadrature non-convergence */
  HB_ERROR_UNKNOWN = 4
} hb_status;

typedef enum hb_tail_scaling {
  HB_SCALING_UNSCALED = 0,
  HB_SCALING_SQRT_N = 1,
  HB_SCALING_BETA_N = 2
} hb_tail_scaling;

/* Library version string, e.g. "1.0.0". */
HB_API const char* hb_version(void);

/* Thread-local message describing the most recent failure in this thread. */
HB_API const char* hb_last_error(void);

/* ------------------------------------------------------------------ core */

/* Counter-based replica seed derivation (pure, order independent). */
HB_API hb_status hb_derive_replica_seed(uint64_t value, uint64_t stream, uint64_t replica,
                                        uint64_t* out_value, uint64_t* out_stream);

/* Eigenvalues (descending, clamped at zero) of B B^T plus trace, Tr((BB^T)^2)
 * and the operator norm. eigenvalues must hold m doubles. */
HB_API hb_status hb_gram_spectrum(const double* B, int m, int k, double* eigenvalues,
                                  double* trace, double* trace_of_square, double* op_norm);

HB_API hb_status hb_frobenius_sq(const double* B, int m, int k, double* out);

/* -------------------------------------------------------------- sampling */

/* m x k block of independent standard normals. out: m*k doubles. */
HB_API hb_status hb_sample_gaussian_block(int m, int k, uint64_t seed_value,
                                          uint64_t seed_stream, double* out);

/* Haar frame in V_{m,N} (orthonormal rows). out: m*N doubles, row-major. */
HB_API hb_status hb_sample_stiefel(int m, int64_t N, uint64_t seed_value, uint64_t seed_stream,
                                   double* out);

/* sqrt(N) times the upper-left m x k block of a fresh Haar frame in
 * V_{frame_m, N}. out: m*k doubles. */
HB_API hb_status hb_sample_scaled_block(int frame_m, int64_t N, int m, int k,
                                        uint64_t seed_value, uint64_t seed_stream, double* out);

/* --------------------------------------------------------------- density */

HB_API hb_status hb_log_multigamma(int m, double x, double* out);

/* log f_N(A); *in_support = 0 and *log_value = -inf outside the support. */
HB_API hb_status hb_log_block_density(const double* A, int m, int k, int64_t N,
                                      double* log_value, int* in_support);

/* log g_N(B), the density of sqrt(N) times the block. */
HB_API hb_status hb_log_scaled_density(const double* B, int m, int k, int64_t N,
                                       double* log_value, int* in_support);

HB_API hb_status hb_log_gaussian_density(const double* B, int m, int k, double* out);

/* log(g_N/phi_N); fails with HB_ERROR_DOMAIN outside the support. */
HB_API hb_status hb_log_density_ratio(const double* B, int m, int k, int64_t N, double* out);

/* log P(scaled entry > t); b is read only for HB_SCALING_BETA_N. */
HB_API hb_status hb_marginal_tail(double t, hb_tail_scaling scaling, double b, int64_t N,
                                  double* out);

/* ----------------------------------------------------------- asymptotics */

/* out: {leading, correction_frobenius, correction_trace, exact, remainder}. */
HB_API hb_status hb_logdet_expansion(const double* B, int m, int k, int64_t N, double out[5]);

HB_API hb_status hb_remainder_bound(double R, int m, int k, int64_t N, double C, double* out);

HB_API hb_status hb_gamma_quotient_residual(int m, int k, int64_t N, double* out);

/* terms: {R^4/N, mk(m+k)/N, (k+m)R^2/N}. */
HB_API hb_status hb_local_limit_bound(double R, int m, int k, int64_t N, double terms[3]);

/* Empirical sup audit of |log(g_N/phi_N)| over the radius-R probe set. */
HB_API hb_status hb_audit_local_limit(int m, int k, int64_t N, double R, int n_probe,
                                      uint64_t seed_value, uint64_t seed_stream, int threads,
                                      double* observed, double terms[3],
                                      double* implied_constant);

/* ----------------------------------------------------------------- rates */

/* edges: n_edges ascending interior edges; masses: n_edges + 1 bin masses. */
HB_API hb_status hb_kl_histogram(const double* edges, int n_edges, const double* masses,
                                 int n_masses, double* out);

/* mean: m doubles, cov: m*m row-major symmetric. +inf for singular cov. */
HB_API hb_status hb_kl_gaussian(const double* mean, const double* cov, int m, double* out);

HB_API hb_status hb_stiefel_ldp_rate(const double* mean, const double* cov, int m, double* out);

HB_API hb_status hb_orthogonal_ldp_rate(const double* T, int rows, int cols, double* out);

HB_API hb_status hb_mdp_rate(const double* A, int m, int k, double* out);

/* values need not be sorted; a sorted copy is taken internally. */
HB_API hb_status hb_levy_distance(const double* values, int64_t n, double* out);

/* edges: bins+1 doubles out, masses: bins+2 doubles out. */
HB_API hb_status hb_build_histogram(const double* values, int64_t n, double L, int bins,
                                    double* edges, double* masses);

/* ----------------------------------------------------------- experiments */

typedef struct hb_report hb_report;

/* Runs the experiment described by a JSON config (see the project README for
 * the schema). threads = 0 uses all hardware threads. */
HB_API hb_status hb_experiment_run(const char* config_json, int threads, hb_report** out);

/* Serialized artifact (JSON) including the resolved config; owned by the
 * report handle. */
HB_API const char* hb_report_json(const hb_report* report);

/* CSV projection of the report rows; owned by the report handle. */
HB_API const char* hb_report_csv(const hb_report* report);

/* Wall-clock seconds the run took (not part of the serialized artifact). */
HB_API double hb_report_wall_seconds(const hb_report* report);

HB_API void hb_report_free(hb_report* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HAARBLOCKS_H */
