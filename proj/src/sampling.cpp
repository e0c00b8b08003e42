#include "haarblocks/sampling.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace haarblocks {

MatrixBlock sample_gaussian_block(int m, int k, const Seed& seed) {
  if (m < 1 || k < 1) throw DimensionError("sample_gaussian_block: m, k must be >= 1");
  std::mt19937_64 engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixBlock B = MatrixBlock::zero(m, k);
  for (double& v : B.entries) v = normal(engine);
  return B;
}

StiefelFrame sample_stiefel(int m, std::int64_t N, const Seed& seed) {
  if (m < 1) throw DimensionError("sample_stiefel: m must be >= 1");
  if (N < m)
    throw DimensionError("sample_stiefel: need m <= N (got m=" + std::to_string(m) +
                         ", N=" + std::to_string(N) + ")");

  std::mt19937_64 engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  StiefelFrame frame;
  frame.m = m;
  frame.N = N;
  frame.entries.resize(static_cast<std::size_t>(m) * N);

  if (m == 1) {
    // A single Haar row is a uniform point on the sphere: normalize.
    double norm_sq = 0.0;
    for (double& v : frame.entries) {
      v = normal(engine);
      norm_sq += v * v;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& v : frame.entries) v *= inv;
    return frame;
  }

  // Gaussian rows, drawn row-major so the stream layout is independent of the
  // linear algebra below.
  Eigen::MatrixXd Gt(N, m);  // transpose of the Gaussian m x N matrix
  for (int i = 0; i < m; ++i)
    for (std::int64_t j = 0; j < N; ++j) Gt(j, i) = normal(engine);

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Gt);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(N, m);
  // Without fixing the sign convention of R's diagonal the factorization is
  // not Haar-distributed.
  for (int j = 0; j < m; ++j)
    if (qr.matrixQR()(j, j) < 0.0) Q.col(j) = -Q.col(j);

  for (int i = 0; i < m; ++i)
    for (std::int64_t j = 0; j < N; ++j)
      frame.entries[static_cast<std::size_t>(i) * N + j] = Q(j, i);
  return frame;
}

StiefelFrame sample_haar_orthogonal(std::int64_t N, const Seed& seed) {
  if (N < 1) throw DimensionError("sample_haar_orthogonal: N must be >= 1");
  return sample_stiefel(static_cast<int>(N), N, seed);
}

MatrixBlock scaled_block(const StiefelFrame& frame, int m, int k) {
  if (m < 1 || k < 1)
    throw DimensionError("scaled_block: degenerate block request (m=" + std::to_string(m) +
                         ", k=" + std::to_string(k) + ")");
  if (m > frame.m || static_cast<std::int64_t>(k) > frame.N)
    throw DimensionError("scaled_block: requested " + std::to_string(m) + "x" +
                         std::to_string(k) + " block exceeds " + std::to_string(frame.m) + "x" +
                         std::to_string(frame.N) + " frame");
  const double scale = std::sqrt(static_cast<double>(frame.N));
  MatrixBlock B = MatrixBlock::zero(m, k);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) B(i, j) = scale * frame(i, j);
  return B;
}

EmpiricalSample empirical_sample(const MatrixBlock& B) {
  B.validate();
  EmpiricalSample s;
  s.m = B.rows;
  s.k = B.cols;
  s.values = B.entries;
  std::sort(s.values.begin(), s.values.end());
  return s;
}

double orthonormality_defect(const StiefelFrame& frame) {
  double worst = 0.0;
  for (int i = 0; i < frame.m; ++i)
    for (int j = i; j < frame.m; ++j) {
      double dot = 0.0;
      for (std::int64_t c = 0; c < frame.N; ++c) dot += frame(i, c) * frame(j, c);
      worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace haarblocks
