#pragma once

#include "haarblocks/core.hpp"

#include <cstdint>

// Exact log-domain evaluation of the block density f_N of the upper-left
// m x k block of a Haar orthogonal matrix, its scaled version g_N (density of
// sqrt(N) times the block), the Gaussian comparison density phi_N, the
// log-ratio log(g_N/phi_N), and one-dimensional marginal tail probabilities
// by adaptive quadrature.
//
// Everything is evaluated in log domain: the exponents are of order N and
// linear-domain evaluation overflows around N ~ 700.

namespace haarblocks {

/// Log density value with an in-band out-of-support marker (-infinity), so
/// Monte Carlo integrands can handle support violations per sample instead of
/// through exceptions.
struct LogDensityValue {
  double log_value = 0.0;
  bool in_support = true;

  static LogDensityValue out_of_support();
};

enum class TailScaling { unscaled, sqrtN, betaN };

/// Tail query P(scaled entry > t). For betaN the entry is scaled by N^b with
/// exponent b in (0, 1/2).
struct TailQuery {
  double t = 0.0;
  TailScaling scaling = TailScaling::unscaled;
  double beta_exponent = 0.0;  // only read when scaling == betaN
};

/// Multivariate gamma function in log form:
///   (m(m-1)/4) log pi + sum_{i=1..m} log Gamma(x - (i-1)/2),  x > (m-1)/2.
double log_multigamma(int m, double x);

/// sum_i log(1 - lambda_i/N) over the Gram eigenvalues of B.
/// Throws DomainError when ||B B^T||_op >= N (outside the support of g_N).
double log_det_gap(const MatrixBlock& B, std::int64_t N);

/// log f_N(A); in_support = false iff ||A A^T||_op >= 1.
LogDensityValue log_block_density(const MatrixBlock& A, const BlockDims& dims);

/// log g_N(B) = -(mk/2) log N + log f_N(B / sqrt(N)).
LogDensityValue log_scaled_density(const MatrixBlock& B, const BlockDims& dims);

/// log phi_N(B) = -(mk/2) log(2 pi) - ||B||_F^2 / 2.
double log_gaussian_density(const MatrixBlock& B);

/// log(g_N(B) / phi_N(B)), assembled from the shared log-gamma and log-det
/// primitives so the two densities' common bulk cancels symbolically rather
/// than numerically. Throws DomainError (carrying the offending operator
/// norm) when B lies outside the support of g_N.
double log_density_ratio(const MatrixBlock& B, const BlockDims& dims);

/// log P(scaled (1,1) entry > t) for the m = k = 1 marginal, by adaptive
/// log-domain quadrature of c_N (1-x^2)^((N-3)/2). Accurate to ~1e-8 in
/// log-probability for N up to 1e10. Returns -infinity when the threshold
/// maps outside [-1, 1] on the right.
double marginal_tail(const TailQuery& q, std::int64_t N);

namespace detail {

/// log Gamma_m(N/2) - log Gamma_m((N-k)/2) - (mk/2) log(N/2), evaluated
/// without forming the individually huge log-gamma values. This is the
/// residual the gamma-quotient estimate asserts is O(mk(m+k)/N).
double gamma_quotient_residual(const BlockDims& dims);

/// sum_i [ C_N log(1 - lambda_i/N) + lambda_i/2 ] with C_N = (N-k-m-1)/2,
/// given the Gram eigenvalues of B. The log-det part of log(g_N/phi_N).
double logdet_minus_gaussian(const SpectralSummary& spectrum, const BlockDims& dims);

}  // namespace detail

}  // namespace haarblocks
