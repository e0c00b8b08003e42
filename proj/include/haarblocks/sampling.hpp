#pragma once

#include "haarblocks/core.hpp"

#include <cstdint>

// Haar-distributed orthogonal matrices and Stiefel frames, block extraction
// with sqrt(N) scaling, and the empirical sample of scaled entries.
//
// Frames follow the row convention: an m x N frame V has orthonormal rows,
// V V^T = Id_m. Sampling is QR-based with the sign of the triangular factor's
// diagonal fixed, which is what makes the result exactly Haar rather than
// merely orthonormal.

namespace haarblocks {

/// Row-orthonormal m x N frame, entries row-major.
/// Invariant: ||V V^T - Id_m||_max <= 1e-10.
struct StiefelFrame {
  int m = 0;
  std::int64_t N = 0;
  std::vector<double> entries;

  double operator()(int i, std::int64_t j) const {
    return entries[static_cast<std::size_t>(i) * N + j];
  }
};

/// Sorted scaled block entries; the empirical measure is the uniform
/// distribution on these values.
struct EmpiricalSample {
  std::vector<double> values;  // non-decreasing, m*k entries
  int m = 0;
  int k = 0;
};

/// m x k block of independent standard normals.
MatrixBlock sample_gaussian_block(int m, int k, const Seed& seed);

/// Haar-distributed frame in V_{m,N} (1 <= m <= N): orthonormalize the rows
/// of an m x N Gaussian matrix via QR of its transpose, then flip each row by
/// the sign of the corresponding triangular diagonal entry. Cost O(N m^2).
StiefelFrame sample_stiefel(int m, std::int64_t N, const Seed& seed);

/// Haar-distributed N x N orthogonal matrix; equals sample_stiefel(N, N).
StiefelFrame sample_haar_orthogonal(std::int64_t N, const Seed& seed);

/// sqrt(N) times the upper-left m x k block of the frame.
MatrixBlock scaled_block(const StiefelFrame& frame, int m, int k);

/// Sorted entries of B as a discrete measure carrier.
EmpiricalSample empirical_sample(const MatrixBlock& B);

/// Max-norm of V V^T - Id_m (the frame orthonormality defect).
double orthonormality_defect(const StiefelFrame& frame);

}  // namespace haarblocks
