#pragma once

#include <Eigen/Sparse>

#include <cstdint>

#include "sdrct/types.hpp"

namespace sdrct {

/// Sparse parallel-beam system matrix. Row i = a * detector_count + d holds
/// the exact intersection lengths of ray (angle a, detector bin d) with every
/// pixel it crosses; columns are linear pixel indices j = y*L + x. Rays that
/// miss the grid have empty rows. Immutable once built; safe to share across
/// slice workers.
struct SparseSystemMatrix {
  GridGeometry geometry;
  Eigen::SparseMatrix<double, Eigen::RowMajor, int> weights;  // (A*D) x L^2

  std::int64_t nnz() const { return weights.nonZeros(); }
};

/// Builds the system matrix by incremental ray traversal, parallel over rows.
SparseSystemMatrix build_system_matrix(const GridGeometry& geometry,
                                       int threads = 0);

/// Bytes needed to store the matrix (32-bit column indices + f64 weights +
/// row offsets), computed by a counting traversal without allocating it.
std::uint64_t estimate_system_matrix_bytes(const GridGeometry& geometry);

/// W f. Rays marked invalid by `valid` (a (detector, angle) plane) return 0.
VectorXd forward_project(const SparseSystemMatrix& matrix,
                         const SliceImage& slice,
                         const BoolGrid* valid = nullptr);

/// W^T p restricted to valid rays.
SliceImage back_project(const SparseSystemMatrix& matrix,
                        const VectorXd& ray_values,
                        const BoolGrid* valid = nullptr);

}  // namespace sdrct
