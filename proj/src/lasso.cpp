#include "sdrct/lasso.hpp"

#include <cmath>
#include <stdexcept>

namespace sdrct {

std::pair<VectorXd, BoolGrid> projection_difference(const SinogramStack& sino,
                                                    int l) {
  if (l < 0 || l + 1 >= sino.geometry.slice_count) {
    throw std::invalid_argument("projection_difference: slice index out of range");
  }
  BoolGrid valid = sino.mask.valid[l] && sino.mask.valid[l + 1];
  ArrayXXd diff = valid.select(sino.data[l + 1] - sino.data[l], 0.0);
  VectorXd p = Eigen::Map<const VectorXd>(diff.data(), diff.size());
  return {std::move(p), std::move(valid)};
}

LassoResult lasso_cd_core(const ColMajorSparse& columns, const VectorXd& p,
                          const BoolVector* valid, double lambda2, double n,
                          double tolerance, int max_sweeps) {
  if (lambda2 < 0.0) {
    throw std::invalid_argument("lasso_cd: lambda2 must be nonnegative");
  }
  if (!(n > 0.0)) {
    throw std::invalid_argument("lasso_cd: normalization count must be positive");
  }
  const Eigen::Index m = columns.cols();
  const bool* v = valid ? valid->data() : nullptr;

  VectorXd col_sq = VectorXd::Zero(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double sum = 0.0;
    for (ColMajorSparse::InnerIterator it(columns, j); it; ++it) {
      if (v && !v[it.row()]) continue;
      sum += it.value() * it.value();
    }
    col_sq[j] = sum;
  }

  LassoResult result;
  result.f = VectorXd::Zero(m);
  VectorXd residual = p;  // r = p - A f, zero on invalid rays
  if (v) {
    for (Eigen::Index i = 0; i < residual.size(); ++i) {
      if (!v[i]) residual[i] = 0.0;
    }
  }

  int sweeps_run = 0;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (col_sq[j] == 0.0) continue;
      double dot = 0.0;
      for (ColMajorSparse::InnerIterator it(columns, j); it; ++it) {
        if (v && !v[it.row()]) continue;
        dot += it.value() * residual[it.row()];
      }
      const double rho = (dot + col_sq[j] * result.f[j]) / n;
      const double updated = soft_threshold(rho, lambda2) * n / col_sq[j];
      const double delta = updated - result.f[j];
      if (delta != 0.0) {
        for (ColMajorSparse::InnerIterator it(columns, j); it; ++it) {
          if (v && !v[it.row()]) continue;
          residual[it.row()] -= it.value() * delta;
        }
        result.f[j] = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    ++sweeps_run;
    if (max_change < tolerance) {
      converged = true;
      break;
    }
  }
  result.sweeps = sweeps_run;
  result.converged = converged;
  result.kkt_violation =
      lasso_kkt_violation(columns, p, valid, lambda2, n, result.f);
  return result;
}

double lasso_kkt_violation(const ColMajorSparse& columns, const VectorXd& p,
                           const BoolVector* valid, double lambda2, double n,
                           const VectorXd& f) {
  const bool* v = valid ? valid->data() : nullptr;
  VectorXd residual = columns * f - p;  // A f - p
  if (v) {
    for (Eigen::Index i = 0; i < residual.size(); ++i) {
      if (!v[i]) residual[i] = 0.0;
    }
  }
  double worst = 0.0;
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    double g = 0.0;
    for (ColMajorSparse::InnerIterator it(columns, j); it; ++it) {
      if (v && !v[it.row()]) continue;
      g += it.value() * residual[it.row()];
    }
    g /= n;
    double violation;
    if (f[j] > 0.0) {
      violation = std::abs(g + lambda2);
    } else if (f[j] < 0.0) {
      violation = std::abs(g - lambda2);
    } else {
      violation = std::max(0.0, std::abs(g) - lambda2);
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

DiffEstimate lasso_cd(const SparseSystemMatrix& matrix, const VectorXd& p_diff,
                      const BoolGrid& validity, double lambda2,
                      const ReconConfig& config) {
  if (p_diff.size() != matrix.geometry.ray_count()) {
    throw std::invalid_argument("lasso_cd: ray vector length mismatch");
  }
  const ColMajorSparse columns = matrix.weights;  // reorder to column storage
  const BoolVector valid =
      Eigen::Map<const BoolVector>(validity.data(), validity.size());
  const double n = config.lasso_normalization == LassoNormalization::all_rays
                       ? double(matrix.geometry.ray_count())
                       : double(valid.count());
  LassoResult core =
      lasso_cd_core(columns, p_diff, &valid, lambda2, n,
                    config.lasso_tolerance, config.lasso_max_sweeps);

  DiffEstimate estimate;
  estimate.image = SliceImage(matrix.geometry);
  estimate.image.as_vector() = core.f;
  estimate.sweeps = core.sweeps;
  estimate.kkt_violation = core.kkt_violation;
  estimate.converged = core.converged;
  return estimate;
}

}  // namespace sdrct
