#include "haarblocks/rates.hpp"

#include "haarblocks/special.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace haarblocks {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double kl_histogram(const Histogram& mu) {
  const std::size_t interior_edges = mu.edges.size();
  if (interior_edges < 1) throw DomainError("kl_histogram: need at least one edge");
  if (mu.masses.size() != interior_edges + 1)
    throw DomainError("kl_histogram: need one mass per bin (edges + 1)");
  for (std::size_t i = 1; i < interior_edges; ++i)
    if (!(mu.edges[i] > mu.edges[i - 1]))
      throw DomainError("kl_histogram: edges must be strictly increasing");
  double total = 0.0;
  for (double p : mu.masses) {
    if (!(p >= 0.0)) throw DomainError("kl_histogram: masses must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw DomainError("kl_histogram: masses sum to " + std::to_string(total) + ", expected 1");

  double kl = 0.0;
  for (std::size_t i = 0; i < mu.masses.size(); ++i) {
    const double p = mu.masses[i];
    if (p == 0.0) continue;
    double q;
    if (i == 0)
      q = normal_cdf(mu.edges.front());
    else if (i == mu.masses.size() - 1)
      q = normal_sf(mu.edges.back());
    else
      q = normal_cdf(mu.edges[i]) - normal_cdf(mu.edges[i - 1]);
    if (!(q > 0.0)) return kInf;
    kl += p * std::log(p / q);
  }
  return kl;
}

namespace {

Eigen::MatrixXd covariance_matrix(const GaussianSpec& spec, const char* who) {
  const std::size_t m = spec.mean.size();
  if (m == 0) throw DimensionError(std::string(who) + ": empty mean");
  if (spec.covariance.size() != m * m)
    throw DimensionError(std::string(who) + ": covariance must be m x m");
  Eigen::MatrixXd sigma(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) sigma(i, j) = spec.covariance[i * m + j];
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw DomainError(std::string(who) + ": covariance not symmetric");
  return sigma;
}

}  // namespace

double kl_gaussian(const GaussianSpec& spec) {
  const Eigen::MatrixXd sigma = covariance_matrix(spec, "kl_gaussian");
  const auto m = static_cast<int>(spec.mean.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("kl_gaussian: eigensolver failed");

  double trace = 0.0, log_det = 0.0;
  for (int i = 0; i < m; ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (!(lambda > 0.0)) return kInf;  // singular covariance
    trace += lambda;
    log_det += std::log(lambda);
  }
  double mean_sq = 0.0;
  for (double mu : spec.mean) mean_sq += mu * mu;
  return 0.5 * (trace + mean_sq - m - log_det);
}

double stiefel_ldp_rate(const GaussianSpec& spec) {
  const Eigen::MatrixXd sigma = covariance_matrix(spec, "stiefel_ldp_rate");
  const auto m = static_cast<int>(spec.mean.size());
  Eigen::VectorXd mean(m);
  for (int i = 0; i < m; ++i) mean(i) = spec.mean[static_cast<std::size_t>(i)];

  const Eigen::MatrixXd C = sigma + mean * mean.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(C, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("stiefel_ldp_rate: eigensolver failed");
  if (solver.eigenvalues().minCoeff() < 1.0 - 1e-10) return kInf;  // C - Id not PSD

  return kl_gaussian(spec) + 0.5 * (m - C.trace());
}

double orthogonal_ldp_rate(const MatrixBlock& T) {
  const SpectralSummary s = gram_spectrum(T);
  if (!(s.op_norm < 1.0)) return kInf;
  double rate = 0.0;
  for (double lambda : s.eigenvalues) rate -= 0.5 * std::log1p(-lambda);
  return rate;
}

double mdp_rate(const MatrixBlock& A) { return 0.5 * frobenius_sq(A); }

double levy_distance(std::span<const double> sorted_values) {
  const std::size_t n = sorted_values.size();
  if (n == 0) throw DomainError("levy_distance: empty sample");
  for (std::size_t i = 1; i < n; ++i)
    if (sorted_values[i] < sorted_values[i - 1])
      throw DomainError("levy_distance: sample must be sorted");

  // eps is admissible iff Phi(x - eps) - eps <= F(x) <= Phi(x + eps) + eps
  // for all x. With F an empirical step function the extremes sit at the
  // sample points: just left of a jump F = i/n, at the jump F = (i+1)/n.
  const double inv_n = 1.0 / static_cast<double>(n);
  auto admissible = [&](double eps) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = sorted_values[i];
      if (normal_cdf(x - eps) - eps > static_cast<double>(i) * inv_n) return false;
      if (static_cast<double>(i + 1) * inv_n > normal_cdf(x + eps) + eps) return false;
    }
    return true;
  };

  double lo = 0.0, hi = 1.0;  // the Levy distance to a CDF never exceeds 1
  for (int iter = 0; iter < 60 && hi - lo > 1e-14; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? hi : lo) = mid;
  }
  return hi;
}

double levy_distance(const EmpiricalSample& sample) {
  return levy_distance(std::span<const double>(sample.values));
}

Histogram build_histogram(const EmpiricalSample& sample, double L, int bins) {
  if (!(L > 0.0)) throw DomainError("build_histogram: L must be > 0");
  if (bins < 2) throw DomainError("build_histogram: need at least 2 interior bins");
  if (sample.values.empty()) throw DomainError("build_histogram: empty sample");

  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i)
    h.edges[static_cast<std::size_t>(i)] = -L + 2.0 * L * i / bins;
  h.masses.assign(static_cast<std::size_t>(bins) + 2, 0.0);

  const double width = 2.0 * L / bins;
  const double weight = 1.0 / static_cast<double>(sample.values.size());
  for (double x : sample.values) {
    std::size_t bin;
    if (x < -L)
      bin = 0;
    else if (x >= L)
      bin = static_cast<std::size_t>(bins) + 1;
    else
      bin = 1 + std::min<std::size_t>(static_cast<std::size_t>((x + L) / width),
                                      static_cast<std::size_t>(bins) - 1);
    h.masses[bin] += weight;
  }
  return h;
}

}  // namespace haarblocks
