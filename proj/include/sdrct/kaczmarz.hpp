#pragma once

#include <Eigen/Sparse>

#include "sdrct/system_matrix.hpp"
#include "sdrct/types.hpp"

namespace sdrct {

using RowMajorSparse = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/// Squared L2 norm of every row of W.
VectorXd row_squared_norms(const RowMajorSparse& weights);

/// One pass of relaxed row projections f <- f - alpha*(<f,W_i> - p_i)/|W_i|^2
/// over all rays in row order. Rays with a false `valid` flag or zero norm
/// are skipped. Mutates f in place.
void kaczmarz_sweep_rows(const RowMajorSparse& weights, const VectorXd& p,
                         const bool* valid, double alpha,
                         const VectorXd& row_sq_norms, Eigen::Ref<VectorXd> f);

/// Domain wrapper over one slice.
SliceImage kaczmarz_sweep(const SparseSystemMatrix& matrix, const VectorXd& p,
                          const BoolGrid* valid, SliceImage f, double alpha);

}  // namespace sdrct
