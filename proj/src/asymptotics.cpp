#include "haarblocks/asymptotics.hpp"

#include "haarblocks/density.hpp"
#include "haarblocks/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace haarblocks {

ExpansionBreakdown logdet_expansion(const MatrixBlock& B, const BlockDims& dims) {
  if (B.rows != dims.m || B.cols != dims.k)
    throw DimensionError("logdet_expansion: block shape does not match dims");
  const SpectralSummary s = gram_spectrum(B);
  const double N = static_cast<double>(dims.N);
  if (!(s.op_norm < N))
    throw DomainError("logdet_expansion: ||BB^T||_op = " + std::to_string(s.op_norm) +
                      " >= N = " + std::to_string(dims.N));

  ExpansionBreakdown e;
  e.leading = -0.5 * s.trace;
  e.correction_frobenius = (dims.k + dims.m + 1) / (2.0 * N) * s.trace;
  e.correction_trace = -s.trace_of_square / (4.0 * N);
  const double C_N = 0.5 * (N - dims.k - dims.m - 1);
  double log_det = 0.0;
  for (double lambda : s.eigenvalues) log_det += std::log1p(-lambda / N);
  e.exact = C_N * log_det;
  e.remainder = e.exact - (e.leading + e.correction_frobenius + e.correction_trace);
  return e;
}

double remainder_bound(double R, const BlockDims& dims, double C) {
  if (!(R >= 0.0)) throw DomainError("remainder_bound: R must be >= 0");
  if (!(C > 0.0)) throw DomainError("remainder_bound: C must be > 0");
  const double N = static_cast<double>(dims.N);
  const double R2 = R * R;
  return C * ((dims.k + dims.m) * R2 * R2 + R2 * R2 * R2) / (N * N);
}

double gamma_quotient_residual(const BlockDims& dims) {
  if (dims.N <= static_cast<std::int64_t>(dims.m) + dims.k)
    throw DomainError("gamma_quotient_residual: need N > m + k");
  return detail::gamma_quotient_residual(dims);
}

BoundReport local_limit_bound(double R, const BlockDims& dims, double C) {
  if (!(R >= 0.0)) throw DomainError("local_limit_bound: R must be >= 0");
  if (!(C > 0.0)) throw DomainError("local_limit_bound: C must be > 0");
  const double N = static_cast<double>(dims.N);
  BoundReport report;
  report.bound_terms.r4_over_n = R * R * R * R / N;
  report.bound_terms.entries_over_n = static_cast<double>(dims.p()) * (dims.m + dims.k) / N;
  report.bound_terms.r2_over_n = (dims.k + dims.m) * R * R / N;
  report.constant = C;
  return report;
}

namespace {

// Scale B so that ||B||_F = radius (no-op for a zero matrix).
MatrixBlock with_radius(MatrixBlock B, double radius) {
  const double norm = std::sqrt(frobenius_sq(B));
  if (norm == 0.0) return B;
  const double s = radius / norm;
  for (double& v : B.entries) v *= s;
  return B;
}

}  // namespace

BoundReport audit_local_limit(const BlockDims& dims, double R, int n_probe, const Seed& seed,
                              unsigned threads) {
  if (!(R >= 0.0)) throw DomainError("audit_local_limit: R must be >= 0");
  if (!(R * R < static_cast<double>(dims.N)))
    throw DomainError("audit_local_limit: need R^2 < N so every probe stays in the support");
  if (n_probe < 0) throw DomainError("audit_local_limit: n_probe must be >= 0");

  const int m = dims.m, k = dims.k;
  const double radii[4] = {0.25 * R, 0.5 * R, 0.75 * R, R};

  // Deterministic probes: the origin plus the structured extreme-spectrum
  // blocks at full radius. All three structured shapes are rank one, which is
  // where the ratio's log-det part is extremal for a given Frobenius norm.
  std::vector<MatrixBlock> fixed;
  fixed.push_back(MatrixBlock::zero(m, k));
  fixed.push_back(MatrixBlock::single_entry(m, k, 0, 0, R));
  fixed.push_back(with_radius(MatrixBlock::constant(m, k, 1.0), R));
  {
    MatrixBlock row = MatrixBlock::zero(m, k);  // rank-one u e_1^T pattern
    for (int j = 0; j < k; ++j) row(0, j) = 1.0 + j;
    fixed.push_back(with_radius(std::move(row), R));
  }

  double observed = 0.0;
  for (const MatrixBlock& B : fixed)
    observed = std::max(observed, std::abs(log_density_ratio(B, dims)));

  // Random directions, one derived seed per probe; each direction is scanned
  // across the radius grid and also contributes a random rank-one block.
  std::vector<double> per_probe(static_cast<std::size_t>(n_probe), 0.0);
  parallel_for(static_cast<std::size_t>(n_probe), threads, [&](std::size_t p) {
    std::mt19937_64 engine = make_engine(derive_replica_seed(seed, p));
    std::normal_distribution<double> normal(0.0, 1.0);
    MatrixBlock dir = MatrixBlock::zero(m, k);
    for (double& v : dir.entries) v = normal(engine);

    double worst = 0.0;
    for (double r : radii)
      worst = std::max(worst, std::abs(log_density_ratio(with_radius(dir, r), dims)));

    MatrixBlock rank_one = MatrixBlock::zero(m, k);
    std::vector<double> u(static_cast<std::size_t>(m)), v(static_cast<std::size_t>(k));
    for (double& x : u) x = normal(engine);
    for (double& x : v) x = normal(engine);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) rank_one(i, j) = u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    worst = std::max(worst, std::abs(log_density_ratio(with_radius(rank_one, R), dims)));

    per_probe[p] = worst;
  });
  for (double w : per_probe) observed = std::max(observed, w);

  BoundReport report = local_limit_bound(R, dims, 1.0);
  report.observed = observed;
  const double total = report.bound_terms.sum();
  report.implied_constant = total > 0.0 ? observed / total : 0.0;
  return report;
}

}  // namespace haarblocks
