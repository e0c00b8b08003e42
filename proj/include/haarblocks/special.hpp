#pragma once

// Scalar special functions used by the density and asymptotics modules.
// The key routine is lgamma_diff: density normalizing constants at large N
// are differences of log-gamma values of order N log N, and forming them by
// naive subtraction loses every digit the subsequent analysis depends on.

namespace haarblocks {

/// log Gamma(x) for x > 0 (thread-safe wrapper).
double log_gamma(double x);

/// log Gamma(x + h) - log Gamma(x), computed without cancellation.
/// Requires x > 0 and x + h > 0. Absolute accuracy ~1e-13 even when the two
/// log-gamma values are of order 1e11.
double lgamma_diff(double x, double h);

/// Standard normal CDF Phi(x), accurate in both tails.
double normal_cdf(double x);

/// Standard normal survival function 1 - Phi(x).
double normal_sf(double x);

/// Inverse of normal_cdf for p in (0, 1).
double normal_quantile(double p);

namespace detail {
/// Stirling correction S(y) = lgamma(y) - [(y-1/2) log y - y + log(2 pi)/2],
/// valid to ~1e-17 for y >= 16.
double lgamma_stirling_tail(double y);
}  // namespace detail

}  // namespace haarblocks
