#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

// Core value types shared by every other module: block dimensions, dense
// row-major matrix blocks, the seeding contract, and the spectral summary of
// a Gram matrix. All types are immutable-by-convention values and all
// operations are pure functions; they can be shared between workers freely.

namespace haarblocks {

// Raised when a dimension precondition is violated (m > N, block larger than
// frame, N < m + k, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an argument leaves the mathematical domain of an operation
// (gamma pole region, out-of-support density query, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when a numerical routine fails to converge; the message carries a
// diagnostic (matrix condition report, quadrature interval trace, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ambient dimension N together with the m x k block shape.
/// Valid iff m >= 1, k >= 1 and N >= m + k (the density formula requires it).
struct BlockDims {
  std::int64_t N = 0;
  int m = 0;
  int k = 0;

  BlockDims(std::int64_t N_, int m_, int k_) : N(N_), m(m_), k(k_) {
    if (m < 1 || k < 1)
      throw DimensionError("BlockDims: m and k must be >= 1 (got m=" +
                           std::to_string(m) + ", k=" + std::to_string(k) + ")");
    if (N < static_cast<std::int64_t>(m) + k)
      throw DimensionError("BlockDims: need N >= m + k (got N=" + std::to_string(N) +
                           ", m+k=" + std::to_string(m + k) + ")");
  }

  /// Number of block entries p = m*k.
  std::int64_t p() const { return static_cast<std::int64_t>(m) * k; }
};

/// Dense real m x k matrix, entries stored row-major.
struct MatrixBlock {
  int rows = 0;
  int cols = 0;
  std::vector<double> entries;  // rows*cols values, row-major

  MatrixBlock() = default;
  MatrixBlock(int m, int k, std::vector<double> data);

  static MatrixBlock zero(int m, int k);
  static MatrixBlock single_entry(int m, int k, int i, int j, double value);
  static MatrixBlock constant(int m, int k, double value);

  double operator()(int i, int j) const { return entries[static_cast<std::size_t>(i) * cols + j]; }
  double& operator()(int i, int j) { return entries[static_cast<std::size_t>(i) * cols + j]; }

  /// Throws DimensionError / DomainError if the entry count is wrong or any
  /// entry is non-finite.
  void validate() const;
};

/// Seeding contract: identical (value, stream) pairs reproduce identical
/// samples bit-for-bit on one build.
struct Seed {
  std::uint64_t value = 1;
  std::uint64_t stream = 0;

  friend bool operator==(const Seed& a, const Seed& b) {
    return a.value == b.value && a.stream == b.stream;
  }
};

/// Eigenvalues of a Gram matrix B*B^T in non-increasing order plus the three
/// derived functionals used throughout the density and asymptotics modules.
struct SpectralSummary {
  std::vector<double> eigenvalues;  // lambda_1 >= ... >= lambda_m >= 0
  double trace = 0.0;               // sum lambda_i = ||B||_F^2
  double trace_of_square = 0.0;     // sum lambda_i^2 = Tr((BB^T)^2)
  double op_norm = 0.0;             // lambda_1
};

/// Spectrum of B*B^T via a symmetric eigensolver on the m x m Gram matrix.
/// Negative round-off eigenvalues above -1e-10*lambda_1 are clamped to zero.
SpectralSummary gram_spectrum(const MatrixBlock& B);

/// Sum of squared entries. Agrees with gram_spectrum(B).trace to 1e-10 relative.
double frobenius_sq(const MatrixBlock& B);

/// Counter-based seed splitting: a pure function of (root, replica), so
/// replicas may be generated in any order or in parallel. Distinct replicas
/// always receive distinct seeds (the stream carries the replica index).
Seed derive_replica_seed(const Seed& root, std::uint64_t replica);

/// Deterministic engine for a seed. mt19937_64 is fully specified by the
/// standard, so a (value, stream) pair reproduces the same stream on any
/// conforming implementation.
std::mt19937_64 make_engine(const Seed& seed);

namespace detail {
// SplitMix64 finalizer; used for seed derivation and engine initialization.
std::uint64_t mix64(std::uint64_t z);
}  // namespace detail

}  // namespace haarblocks
