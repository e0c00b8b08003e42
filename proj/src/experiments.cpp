#include "haarblocks/experiments.hpp"

#include "haarblocks/density.hpp"
#include "haarblocks/parallel.hpp"
#include "haarblocks/rates.hpp"
#include "haarblocks/sampling.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace haarblocks {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::int64_t kMinHitsForConfidence = 100;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

void Schedule::validate(bool need_beta) const {
  if (N_values.empty()) throw DomainError("Schedule: N_values must be non-empty");
  for (std::size_t i = 0; i < N_values.size(); ++i) {
    if (N_values[i] < 3) throw DomainError("Schedule: every N must be >= 3");
    if (i > 0 && N_values[i] <= N_values[i - 1])
      throw DomainError("Schedule: N_values must be strictly increasing");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("Schedule: alpha must lie in (0, 1)");
  if (replicas < 1) throw DomainError("Schedule: replicas must be >= 1");
  if (need_beta && !beta_exponent)
    throw DomainError("Schedule: this experiment needs the beta exponent b");
  if (beta_exponent && !(*beta_exponent > 0.0 && *beta_exponent < 0.5))
    throw DomainError("Schedule: beta exponent must lie in (0, 1/2)");
}

std::int64_t Schedule::p_of(std::int64_t N) const {
  const auto p = static_cast<std::int64_t>(
      std::llround(std::pow(static_cast<double>(N), alpha)));
  return std::max<std::int64_t>(1, p);
}

double Schedule::beta_of(std::int64_t N) const {
  if (!beta_exponent) throw DomainError("Schedule: beta exponent not set");
  return std::pow(static_cast<double>(N), *beta_exponent);
}

std::pair<int, int> Schedule::block_shape(std::int64_t N) const {
  const std::int64_t p = p_of(N);
  const auto root = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(p))));
  for (std::int64_t off = 0;; ++off) {
    for (const std::int64_t d : {root - off, root + off}) {
      if (d < 1 || d > p) continue;
      if (p % d == 0) {
        const std::int64_t m = std::min(d, p / d), k = std::max(d, p / d);
        if (N < m + k)
          throw DimensionError("Schedule: N=" + std::to_string(N) + " too small for block " +
                               std::to_string(m) + "x" + std::to_string(k));
        return {static_cast<int>(m), static_cast<int>(k)};
      }
    }
    if (root - off < 1 && root + off > p)
      throw NumericError("Schedule: no divisor found");  // unreachable: 1 divides p
  }
}

double TestFunction::operator()(double x) const {
  switch (kind) {
    case Kind::scaled_tanh:
      return a * std::tanh(x);
    case Kind::scaled_sin:
      return a * std::sin(x);
    case Kind::clamped_quadratic:
      return std::clamp(c * x * x, -std::abs(a), std::abs(a));
  }
  throw DomainError("TestFunction: unknown kind");
}

double TestFunction::bound() const { return std::abs(a); }

std::string TestFunction::name() const {
  switch (kind) {
    case Kind::scaled_tanh:
      return "scaled_tanh";
    case Kind::scaled_sin:
      return "scaled_sin";
    case Kind::clamped_quadratic:
      return "clamped_quadratic";
  }
  return "unknown";
}

double gauss_hermite_log_mgf(const TestFunction& f, int points) {
  if (points < 2) throw DomainError("gauss_hermite_log_mgf: need at least 2 points");
  // Golub-Welsch on the Hermite Jacobi matrix: nodes are eigenvalues, weights
  // are sqrt(pi) times the squared first eigenvector components.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(points, points);
  for (int i = 1; i < points; ++i) {
    const double off = std::sqrt(0.5 * i);
    J(i - 1, i) = off;
    J(i, i - 1) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(J);
  if (solver.info() != Eigen::Success)
    throw NumericError("gauss_hermite_log_mgf: eigensolver failed");

  // E[e^{f(g)}] = (1/sqrt(pi)) sum_i w_i exp(f(sqrt(2) t_i)); the integrand is
  // bounded, so linear-domain accumulation is safe.
  double sum = 0.0;
  for (int i = 0; i < points; ++i) {
    const double node = solver.eigenvalues()(i);
    const double weight = solver.eigenvectors()(0, i) * solver.eigenvectors()(0, i);
    sum += weight * std::exp(f(std::sqrt(2.0) * node));
  }
  return std::log(sum);  // the sqrt(pi) normalizations cancel
}

namespace {

// Counting experiments share the p-hat bookkeeping.
struct TailCount {
  std::int64_t hits = 0;
  double p_hat = kNaN;
};

TailCount fold_hits(const std::vector<unsigned char>& indicator) {
  TailCount c;
  for (unsigned char b : indicator) c.hits += b;
  c.p_hat = static_cast<double>(c.hits) / static_cast<double>(indicator.size());
  return c;
}

void apply_count_flags(ReportRow& row, const TailCount& c, std::int64_t replicas) {
  row.hits = c.hits;
  row.censored = (c.hits == 0);
  row.low_confidence = (c.hits > 0 && c.hits < kMinHitsForConfidence);
  (void)replicas;
}

double proportion_log_stderr(double p_hat, std::int64_t M) {
  // Delta method on -log(p-hat).
  return std::sqrt((1.0 - p_hat) / (p_hat * static_cast<double>(M)));
}

}  // namespace

ExperimentReport run_logmgf(const TestFunction& f, const Schedule& s, unsigned threads) {
  s.validate(false);
  Stopwatch watch;
  ExperimentReport report;
  report.name = "logmgf";
  report.schedule = s;

  const double reference = gauss_hermite_log_mgf(f);
  const auto M = static_cast<std::size_t>(s.replicas);

  for (std::size_t ni = 0; ni < s.N_values.size(); ++ni) {
    const std::int64_t N = s.N_values[ni];
    const auto [m, k] = s.block_shape(N);
    const double p = static_cast<double>(m) * k;
    const Seed level = derive_replica_seed(s.root_seed, ni);

    std::vector<double> sums(M, 0.0);
    parallel_for(M, threads, [&](std::size_t r) {
      const StiefelFrame frame = sample_stiefel(m, N, derive_replica_seed(level, r));
      const MatrixBlock block = scaled_block(frame, m, k);
      double acc = 0.0;
      for (double y : block.entries) acc += f(y);
      sums[r] = acc;
    });

    // Log-sum-exp with max shift, folded in replica order.
    const double shift = *std::max_element(sums.begin(), sums.end());
    double total = 0.0;
    for (double v : sums) total += std::exp(v - shift);
    const double estimate = (shift + std::log(total) - std::log(static_cast<double>(M))) / p;

    const double mean_w = total / static_cast<double>(M);
    double var_w = 0.0;
    for (double v : sums) {
      const double d = std::exp(v - shift) - mean_w;
      var_w += d * d;
    }
    var_w = (M > 1) ? var_w / static_cast<double>(M - 1) : 0.0;
    const double stderr_log_mean =
        std::sqrt(var_w / static_cast<double>(M)) / mean_w;

    ReportRow row;
    row.N = N;
    row.scale = p;
    row.speed = p;
    row.estimate = estimate;
    row.reference = reference;
    row.abs_error = std::abs(estimate - reference);
    row.mc_stderr = stderr_log_mean / p;
    report.rows.push_back(row);
  }
  report.wall_seconds = watch.seconds();
  return report;
}

ExperimentReport run_empirical_decay(double epsilon, const Schedule& s, unsigned threads) {
  if (!(epsilon > 0.0)) throw DomainError("run_empirical_decay: epsilon must be > 0");
  s.validate(false);
  Stopwatch watch;
  ExperimentReport report;
  report.name = "ldp-decay";
  report.schedule = s;

  const auto M = static_cast<std::size_t>(s.replicas);
  for (std::size_t ni = 0; ni < s.N_values.size(); ++ni) {
    const std::int64_t N = s.N_values[ni];
    const auto [m, k] = s.block_shape(N);
    const double p = static_cast<double>(m) * k;
    const Seed level = derive_replica_seed(s.root_seed, ni);

    std::vector<unsigned char> exceeds(M, 0);
    parallel_for(M, threads, [&](std::size_t r) {
      const StiefelFrame frame = sample_stiefel(m, N, derive_replica_seed(level, r));
      const EmpiricalSample nu = empirical_sample(scaled_block(frame, m, k));
      exceeds[r] = levy_distance(nu) > epsilon ? 1 : 0;
    });

    const TailCount c = fold_hits(exceeds);
    ReportRow row;
    row.N = N;
    row.scale = p;
    row.speed = p;
    row.reference = kNaN;  // inf over the ball complement is not computed
    row.abs_error = kNaN;
    apply_count_flags(row, c, s.replicas);
    if (row.censored) {
      row.estimate = kNaN;
    } else {
      row.estimate = -std::log(c.p_hat) / p;
      row.mc_stderr = proportion_log_stderr(c.p_hat, s.replicas) / p;
    }
    report.rows.push_back(row);
  }
  report.wall_seconds = watch.seconds();
  return report;
}

ExperimentReport run_as_trace(const Schedule& s, unsigned threads) {
  s.validate(false);
  Stopwatch watch;
  ExperimentReport report;
  report.name = "as-trace";
  report.schedule = s;
  report.rows.resize(s.N_values.size());

  parallel_for(s.N_values.size(), threads, [&](std::size_t ni) {
    const std::int64_t N = s.N_values[ni];
    const auto [m, k] = s.block_shape(N);
    const StiefelFrame frame = sample_stiefel(m, N, derive_replica_seed(s.root_seed, ni));
    const double dist = levy_distance(empirical_sample(scaled_block(frame, m, k)));

    ReportRow& row = report.rows[ni];
    row.N = N;
    row.scale = static_cast<double>(m) * k;
    row.speed = row.scale;
    row.estimate = dist;
    row.reference = 0.0;  // weak-limit target
    row.abs_error = dist;
  });
  report.wall_seconds = watch.seconds();
  return report;
}

ExperimentReport run_mdp_entry(double t, const Schedule& s) {
  if (!(t > 0.0)) throw DomainError("run_mdp_entry: t must be > 0");
  s.validate(true);
  Stopwatch watch;
  ExperimentReport report;
  report.name = "mdp-entry";
  report.schedule = s;

  const double b = *s.beta_exponent;
  for (const std::int64_t N : s.N_values) {
    const double beta = s.beta_of(N);
    const double speed = static_cast<double>(N) / (beta * beta);

    ReportRow row;
    row.N = N;
    row.scale = beta;
    row.speed = speed;
    row.reference = 0.5 * t * t;
    if (t * std::pow(static_cast<double>(N), -b) >= 1.0) {
      row.out_of_support = true;  // the threshold maps outside [-1, 1]
      row.estimate = kNaN;
      row.abs_error = kNaN;
    } else {
      const double log_tail = marginal_tail(TailQuery{t, TailScaling::betaN, b}, N);
      row.estimate = -log_tail / speed;
      row.abs_error = std::abs(row.estimate - row.reference);
    }
    report.rows.push_back(row);
  }
  report.wall_seconds = watch.seconds();
  return report;
}

ExperimentReport run_mdp_block(double t, int m, int k, const Schedule& s, unsigned threads) {
  if (!(t >= 0.0)) throw DomainError("run_mdp_block: t must be >= 0");
  if (m < 1 || k < 1 || m * k > 16)
    throw DomainError("run_mdp_block: need 1 <= m*k <= 16 for direct Monte Carlo");
  s.validate(true);
  Stopwatch watch;
  ExperimentReport report;
  report.name = "mdp-block";
  report.schedule = s;

  const auto M = static_cast<std::size_t>(s.replicas);
  for (std::size_t ni = 0; ni < s.N_values.size(); ++ni) {
    const std::int64_t N = s.N_values[ni];
    if (N < m + k)
      throw DimensionError("run_mdp_block: N=" + std::to_string(N) + " smaller than m+k");
    const double beta = s.beta_of(N);
    const double speed = static_cast<double>(N) / (beta * beta);
    // beta * unscaled block = (beta / sqrt(N)) * scaled block
    const double rescale = beta / std::sqrt(static_cast<double>(N));
    const Seed level = derive_replica_seed(s.root_seed, ni);

    std::vector<unsigned char> exceeds(M, 0);
    parallel_for(M, threads, [&](std::size_t r) {
      const StiefelFrame frame = sample_stiefel(m, N, derive_replica_seed(level, r));
      const MatrixBlock block = scaled_block(frame, m, k);
      const double norm = rescale * std::sqrt(frobenius_sq(block));
      exceeds[r] = norm > t ? 1 : 0;
    });

    const TailCount c = fold_hits(exceeds);
    ReportRow row;
    row.N = N;
    row.scale = beta;
    row.speed = speed;
    row.reference = 0.5 * t * t;
    apply_count_flags(row, c, s.replicas);
    if (row.censored) {
      row.estimate = kNaN;
      row.abs_error = kNaN;
    } else {
      row.estimate = -std::log(c.p_hat) / speed;
      row.abs_error = std::abs(row.estimate - row.reference);
      row.mc_stderr = proportion_log_stderr(c.p_hat, s.replicas) / speed;
    }
    report.rows.push_back(row);
  }
  report.wall_seconds = watch.seconds();
  return report;
}

ExperimentReport run_concentration(const Schedule& s, double R_exponent, unsigned threads) {
  if (!(R_exponent > 0.0 && R_exponent < 0.5))
    throw DomainError("run_concentration: R exponent must lie in (0, 1/2)");
  s.validate(false);
  Stopwatch watch;
  ExperimentReport report;
  report.name = "concentration";
  report.schedule = s;

  const auto M = static_cast<std::size_t>(s.replicas);
  for (std::size_t ni = 0; ni < s.N_values.size(); ++ni) {
    const std::int64_t N = s.N_values[ni];
    const auto [m, k] = s.block_shape(N);
    const double R = std::pow(static_cast<double>(N), R_exponent);
    const Seed level = derive_replica_seed(s.root_seed, ni);

    std::vector<unsigned char> exceeds(M, 0);
    parallel_for(M, threads, [&](std::size_t r) {
      const StiefelFrame frame = sample_stiefel(m, N, derive_replica_seed(level, r));
      const double norm = std::sqrt(frobenius_sq(scaled_block(frame, m, k)));
      exceeds[r] = norm > R ? 1 : 0;
    });

    const TailCount c = fold_hits(exceeds);
    ReportRow row;
    row.N = N;
    row.scale = R;
    row.speed = R * R;
    row.estimate = c.p_hat;  // the measured exceedance probability
    apply_count_flags(row, c, s.replicas);
    row.mc_stderr = std::sqrt(c.p_hat * (1.0 - c.p_hat) / static_cast<double>(s.replicas));
    report.rows.push_back(row);
  }

  // Best constant in p <= exp(-c R^2) consistent with every positive count.
  double fitted_c = std::numeric_limits<double>::infinity();
  for (const ReportRow& row : report.rows)
    if (row.hits > 0) fitted_c = std::min(fitted_c, -std::log(row.estimate) / row.speed);
  report.extra["fitted_c"] = fitted_c;
  report.extra["violation"] = (fitted_c <= 0.0) ? 1.0 : 0.0;
  for (ReportRow& row : report.rows) {
    row.reference = std::isfinite(fitted_c) ? std::exp(-fitted_c * row.speed) : kNaN;
    row.abs_error = (std::isfinite(row.reference) && !std::isnan(row.estimate))
                        ? std::max(0.0, row.estimate - row.reference)
                        : kNaN;
  }
  report.wall_seconds = watch.seconds();
  return report;
}

}  // namespace haarblocks
