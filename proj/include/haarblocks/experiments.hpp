#pragma once

#include "haarblocks/core.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

// Scheduled Monte Carlo and quadrature experiments that check the limit
// statements at desk scale: log-MGF convergence, empirical-measure decay
// slopes, the almost-sure trace, entry/block moderate-deviation tails, and
// the norm concentration bound.
//
// Replicas are independent tasks keyed by derived seeds. Per-replica results
// land in index-owned slots and every aggregation folds them in index order,
// so parallel and serial execution produce bit-identical reports.

namespace haarblocks {

/// Experiment schedule: ambient dimensions, the block-growth exponent
/// (p_N = round(N^alpha)), the optional moderate-deviation exponent
/// (beta_N = N^b), the replica count and the root seed.
struct Schedule {
  std::vector<std::int64_t> N_values;
  double alpha = 0.5;
  std::optional<double> beta_exponent;
  int replicas = 1;
  Seed root_seed;

  /// Throws unless N_values is strictly increasing, alpha is in (0,1),
  /// replicas >= 1 and (when required or present) b is in (0, 1/2).
  void validate(bool need_beta = false) const;

  std::int64_t p_of(std::int64_t N) const;  // round(N^alpha), at least 1
  double beta_of(std::int64_t N) const;     // N^b

  /// Most-square factorization of p_N: m is round(sqrt(p)) adjusted to the
  /// nearest divisor, returned with m <= k.
  std::pair<int, int> block_shape(std::int64_t N) const;
};

/// Bounded continuous test functions for the log-MGF harness; sup|f| <= a by
/// construction.
struct TestFunction {
  enum class Kind { scaled_tanh, scaled_sin, clamped_quadratic };
  Kind kind = Kind::scaled_tanh;
  double a = 0.5;
  double c = 1.0;  // clamped_quadratic curvature

  double operator()(double x) const;
  double bound() const;
  std::string name() const;
};

struct ReportRow {
  std::int64_t N = 0;
  double scale = 0.0;      // p_N, beta_N, or R_N depending on the experiment
  double speed = 0.0;      // p_N, N/beta_N^2, or R_N^2
  double estimate = 0.0;   // NaN when censored / out of support
  double reference = 0.0;  // NaN when no reference is computed
  double abs_error = 0.0;
  double mc_stderr = 0.0;  // 0 for quadrature rows
  std::int64_t hits = -1;  // -1 for non-counting experiments
  bool censored = false;         // p-hat == 0: no estimate is formed
  bool low_confidence = false;   // fewer than 100 hits
  bool out_of_support = false;
};

struct ExperimentReport {
  std::string name;
  Schedule schedule;
  std::vector<ReportRow> rows;
  std::map<std::string, double> extra;  // e.g. fitted_c for the concentration fit
  double wall_seconds = 0.0;            // measured, never serialized into artifacts
};

/// Log-MGF convergence: per N the estimate (1/p) log mean_r exp(sum f(y_ij))
/// (log-sum-exp over replicas) against the Gauss-Hermite reference
/// log E[e^{f(g)}].
ExperimentReport run_logmgf(const TestFunction& f, const Schedule& s, unsigned threads = 0);

/// Empirical-measure deviation decay: fraction of replicas whose Levy
/// distance to the Gaussian exceeds epsilon, reported as -log(p-hat)/p_N.
/// No reference value; the infimum over the ball complement is not computed.
ExperimentReport run_empirical_decay(double epsilon, const Schedule& s, unsigned threads = 0);

/// Almost-sure trace: one trajectory of levy_distance(nu_N) along N.
ExperimentReport run_as_trace(const Schedule& s, unsigned threads = 0);

/// Entry moderate-deviation tail by exact quadrature: r_N = -(beta^2/N) log
/// P(beta_N * entry > t) against the limit t^2/2.
ExperimentReport run_mdp_entry(double t, const Schedule& s);

/// Block moderate-deviation tail by direct Monte Carlo on the event
/// ||beta_N block||_F > t (mk <= 16 keeps the event visible to plain MC).
ExperimentReport run_mdp_block(double t, int m, int k, const Schedule& s, unsigned threads = 0);

/// Norm concentration: p-hat of ||scaled block||_F > R_N with R_N = N^r,
/// fitting the best constant in p <= exp(-c R_N^2) over the schedule.
ExperimentReport run_concentration(const Schedule& s, double R_exponent, unsigned threads = 0);

/// log E[e^{f(g)}], g standard normal, by Gauss-Hermite quadrature.
double gauss_hermite_log_mgf(const TestFunction& f, int points = 200);

}  // namespace haarblocks
