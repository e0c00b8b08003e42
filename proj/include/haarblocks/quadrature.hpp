#pragma once

#include <functional>

// Adaptive Gauss-Kronrod (G7, K15) integration. Two variants share the panel
// rule: a linear-domain integrator for well-scaled densities and a log-domain
// integrator that accumulates log sum exp(h) with max-shift, for integrands
// whose exponent spans thousands of log-units (block densities at large N).

namespace haarblocks {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;   // linear variant only
  int max_panels = 20000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

/// integral of f over [a, b]. Throws NumericError with an interval trace when
/// the panel budget is exhausted before the tolerance is met.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

struct LogQuadratureResult {
  double log_value = 0.0;  // log of the integral; -inf when the mass is zero
  double rel_error = 0.0;  // estimated relative error of the (linear) integral
  int panels = 0;
};

/// log of the integral of exp(h) over [a, b]; h may return -infinity.
LogQuadratureResult integrate_log(const std::function<double(double)>& h, double a, double b,
                                  const QuadratureOptions& opts = {});

}  // namespace haarblocks
