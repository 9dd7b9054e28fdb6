#include "sdrct/kaczmarz.hpp"

#include <stdexcept>

namespace sdrct {

VectorXd row_squared_norms(const RowMajorSparse& weights) {
  VectorXd norms = VectorXd::Zero(weights.rows());
  for (int i = 0; i < weights.outerSize(); ++i) {
    double sum = 0.0;
    for (RowMajorSparse::InnerIterator it(weights, i); it; ++it) {
      sum += it.value() * it.value();
    }
    norms[i] = sum;
  }
  return norms;
}

void kaczmarz_sweep_rows(const RowMajorSparse& weights, const VectorXd& p,
                         const bool* valid, double alpha,
                         const VectorXd& row_sq_norms,
                         Eigen::Ref<VectorXd> f) {
  for (int i = 0; i < weights.outerSize(); ++i) {
    if (valid && !valid[i]) continue;
    const double norm_sq = row_sq_norms[i];
    if (norm_sq == 0.0) continue;
    double dot = 0.0;
    for (RowMajorSparse::InnerIterator it(weights, i); it; ++it) {
      dot += it.value() * f[it.col()];
    }
    const double factor = alpha * (dot - p[i]) / norm_sq;
    if (factor == 0.0) continue;
    for (RowMajorSparse::InnerIterator it(weights, i); it; ++it) {
      f[it.col()] -= factor * it.value();
    }
  }
}

SliceImage kaczmarz_sweep(const SparseSystemMatrix& matrix, const VectorXd& p,
                          const BoolGrid* valid, SliceImage f, double alpha) {
  if (f.values.size() != matrix.geometry.pixel_count()) {
    throw std::invalid_argument("kaczmarz_sweep: slice size mismatch");
  }
  if (p.size() != matrix.geometry.ray_count()) {
    throw std::invalid_argument("kaczmarz_sweep: ray vector length mismatch");
  }
  const VectorXd norms = row_squared_norms(matrix.weights);
  auto fv = f.as_vector();
  kaczmarz_sweep_rows(matrix.weights, p, valid ? valid->data() : nullptr,
                      alpha, norms, fv);
  return f;
}

}  // namespace sdrct
