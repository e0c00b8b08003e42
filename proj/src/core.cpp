#include "haarblocks/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace haarblocks {

MatrixBlock::MatrixBlock(int m, int k, std::vector<double> data)
    : rows(m), cols(k), entries(std::move(data)) {
  validate();
}

MatrixBlock MatrixBlock::zero(int m, int k) {
  MatrixBlock b;
  b.rows = m;
  b.cols = k;
  b.entries.assign(static_cast<std::size_t>(m) * k, 0.0);
  b.validate();
  return b;
}

MatrixBlock MatrixBlock::single_entry(int m, int k, int i, int j, double value) {
  MatrixBlock b = zero(m, k);
  b(i, j) = value;
  b.validate();
  return b;
}

MatrixBlock MatrixBlock::constant(int m, int k, double value) {
  MatrixBlock b;
  b.rows = m;
  b.cols = k;
  b.entries.assign(static_cast<std::size_t>(m) * k, value);
  b.validate();
  return b;
}

void MatrixBlock::validate() const {
  if (rows < 1 || cols < 1)
    throw DimensionError("MatrixBlock: rows and cols must be >= 1");
  if (entries.size() != static_cast<std::size_t>(rows) * cols)
    throw DimensionError("MatrixBlock: entry count " + std::to_string(entries.size()) +
                         " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  for (double v : entries)
    if (!std::isfinite(v)) throw DomainError("MatrixBlock: non-finite entry");
}

namespace {

using ConstMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

ConstMap as_eigen(const MatrixBlock& B) { return ConstMap(B.entries.data(), B.rows, B.cols); }

}  // namespace

SpectralSummary gram_spectrum(const MatrixBlock& B) {
  B.validate();
  const int m = B.rows;
  Eigen::MatrixXd gram = as_eigen(B) * as_eigen(B).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "gram_spectrum: eigensolver failed to converge on " << m << "x" << m
        << " Gram matrix (trace=" << gram.trace() << ", max|entry|="
        << gram.cwiseAbs().maxCoeff() << ")";
    throw NumericError(msg.str());
  }

  SpectralSummary s;
  s.eigenvalues.resize(m);
  for (int i = 0; i < m; ++i) s.eigenvalues[i] = solver.eigenvalues()(m - 1 - i);  // descending

  const double lead = s.eigenvalues.empty() ? 0.0 : std::max(s.eigenvalues[0], 0.0);
  const double clamp_tol = 1e-10 * lead;
  for (double& lambda : s.eigenvalues) {
    if (lambda < 0.0) {
      if (lambda < -clamp_tol - 1e-300) {
        std::ostringstream msg;
        msg << "gram_spectrum: eigenvalue " << lambda << " below clamp tolerance "
            << -clamp_tol << " (lambda_1=" << lead << "); Gram matrix not numerically PSD";
        throw NumericError(msg.str());
      }
      lambda = 0.0;
    }
  }

  s.op_norm = s.eigenvalues.empty() ? 0.0 : s.eigenvalues.front();
  for (double lambda : s.eigenvalues) {
    s.trace += lambda;
    s.trace_of_square += lambda * lambda;
  }
  return s;
}

double frobenius_sq(const MatrixBlock& B) {
  B.validate();
  double sum = 0.0;
  for (double v : B.entries) sum += v * v;
  return sum;
}

namespace detail {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

Seed derive_replica_seed(const Seed& root, std::uint64_t replica) {
  // Hash of (value, stream, replica); the replica index becomes the stream of
  // the derived seed, so distinct replicas can never collide.
  std::uint64_t h = detail::mix64(root.value);
  h = detail::mix64(h ^ detail::mix64(root.stream + 0x632BE59BD9B4E019ULL));
  h = detail::mix64(h ^ detail::mix64(replica));
  return Seed{h, replica};
}

std::mt19937_64 make_engine(const Seed& seed) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed.value), static_cast<std::uint32_t>(seed.value >> 32),
      static_cast<std::uint32_t>(seed.stream), static_cast<std::uint32_t>(seed.stream >> 32),
      static_cast<std::uint32_t>(detail::mix64(seed.value ^ seed.stream)),
      static_cast<std::uint32_t>(detail::mix64(seed.value ^ seed.stream) >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace haarblocks
