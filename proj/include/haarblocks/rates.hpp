#pragma once

#include "haarblocks/core.hpp"
#include "haarblocks/sampling.hpp"

#include <span>

// Rate functions of the deviation principles plus a computable weak-topology
// distance between an empirical sample and the standard Gaussian.
//
// Relative entropy against the Gaussian is exposed in two restricted forms
// only: on histograms (a discretization lower bound) and on Gaussian inputs
// (closed form). H(nu | gamma) of a raw discrete sample is identically
// +infinity, so no overload takes an EmpiricalSample.

namespace haarblocks {

/// Piecewise-constant measure: strictly increasing interior edges over
/// [-L, L] plus two unbounded end bins. masses.size() == edges.size() + 1 and
/// the masses sum to 1 (within 1e-12).
struct Histogram {
  std::vector<double> edges;
  std::vector<double> masses;
};

/// Gaussian measure on R^m described by mean and covariance.
struct GaussianSpec {
  std::vector<double> mean;        // length m
  std::vector<double> covariance;  // m x m, row-major, symmetric PSD
};

/// Discretized relative entropy sum p_i log(p_i / q_i) against standard
/// normal bin masses. Returns +infinity if some p_i > 0 meets q_i == 0.
double kl_histogram(const Histogram& mu);

/// Closed form: (trace(Sigma) + ||mean||^2 - m - log det Sigma) / 2.
/// Returns +infinity for a singular covariance.
double kl_gaussian(const GaussianSpec& spec);

/// Empirical-column LDP rate restricted to Gaussian inputs:
/// KL + Tr(Id - C)/2 with C = Sigma + mean mean^T when C - Id is PSD
/// (eigenvalues >= -1e-10), +infinity otherwise. The formula's literal value
/// is returned even when it is negative; callers are expected to warn.
double stiefel_ldp_rate(const GaussianSpec& spec);

/// Unscaled-matrix LDP rate on a finite representative T (zero padding leaves
/// the value unchanged): -log det(Id - T T^T)/2, +infinity if ||TT^T||_op >= 1.
double orthogonal_ldp_rate(const MatrixBlock& T);

/// Moderate-deviation rate ||A||_F^2 / 2.
double mdp_rate(const MatrixBlock& A);

/// Levy distance between the empirical CDF of the sorted values and the
/// standard normal CDF, computed by bisection over epsilon. Metrizes weak
/// convergence on R (equivalent to Levy-Prokhorov for this comparison).
double levy_distance(std::span<const double> sorted_values);
double levy_distance(const EmpiricalSample& sample);

/// Equal-width interior bins on [-L, L] plus two tail bins; masses are the
/// empirical frequencies of the sample.
Histogram build_histogram(const EmpiricalSample& sample, double L, int bins);

}  // namespace haarblocks
