#include "sdrct/ossirt.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "sdrct/kaczmarz.hpp"

namespace sdrct {

SliceImage ossirt_reconstruct(const SparseSystemMatrix& matrix,
                              const VectorXd& p, const BoolGrid* valid,
                              const ReconConfig& config, SliceTrace* trace,
                              int* skipped_subsets) {
  config.validate();
  const auto& W = matrix.weights;
  const int A = matrix.geometry.angle_count;
  const int D = matrix.geometry.detector_count;
  if (p.size() != matrix.geometry.ray_count()) {
    throw std::invalid_argument("ossirt_reconstruct: ray length mismatch");
  }
  const bool* v = valid ? valid->data() : nullptr;
  const int subset_count = std::min(config.ossirt_subsets, A);

  // Interleaved subsets: subset k owns angles k, k+S, k+2S, ...
  std::vector<std::vector<int>> subset_rows(subset_count);
  for (int a = 0; a < A; ++a) {
    auto& rows = subset_rows[a % subset_count];
    for (int d = 0; d < D; ++d) {
      const int i = a * D + d;
      if (!v || v[i]) rows.push_back(i);
    }
  }

  VectorXd row_sums = VectorXd::Zero(W.rows());
  for (int i = 0; i < W.outerSize(); ++i) {
    double sum = 0.0;
    for (RowMajorSparse::InnerIterator it(W, i); it; ++it) sum += it.value();
    row_sums[i] = sum;
  }

  std::vector<VectorXd> subset_col_sums(subset_count);
  for (int k = 0; k < subset_count; ++k) {
    VectorXd col = VectorXd::Zero(W.cols());
    for (int i : subset_rows[k]) {
      for (RowMajorSparse::InnerIterator it(W, i); it; ++it) {
        col[it.col()] += it.value();
      }
    }
    subset_col_sums[k] = std::move(col);
  }

  SliceImage image(matrix.geometry);
  auto f = image.as_vector();
  VectorXd update(W.cols());
  int skipped = 0;

  for (int iter = 0; iter < config.max_outer_iterations; ++iter) {
    const VectorXd before = f;
    for (int k = 0; k < subset_count; ++k) {
      if (subset_rows[k].empty()) {
        ++skipped;
        continue;
      }
      update.setZero();
      for (int i : subset_rows[k]) {
        if (row_sums[i] == 0.0) continue;
        double dot = 0.0;
        for (RowMajorSparse::InnerIterator it(W, i); it; ++it) {
          dot += it.value() * f[it.col()];
        }
        const double residual = (p[i] - dot) / row_sums[i];
        for (RowMajorSparse::InnerIterator it(W, i); it; ++it) {
          update[it.col()] += it.value() * residual;
        }
      }
      const VectorXd& col_sums = subset_col_sums[k];
      for (Eigen::Index j = 0; j < f.size(); ++j) {
        if (col_sums[j] > 0.0) f[j] += update[j] / col_sums[j];
      }
    }
    f = f.cwiseMax(0.0);
    if (trace) {
      trace->delta_sq.push_back((f - before).squaredNorm());
      trace->prev_sq.push_back(before.squaredNorm());
    }
  }
  if (skipped_subsets) *skipped_subsets = skipped;
  return image;
}

}  // namespace sdrct
