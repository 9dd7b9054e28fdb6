#pragma once

#include <Eigen/Sparse>

#include <utility>

#include "sdrct/config.hpp"
#include "sdrct/system_matrix.hpp"
#include "sdrct/types.hpp"

namespace sdrct {

using ColMajorSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using BoolVector = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// S(zeta, eta): shrink zeta toward zero by eta, clipping to 0 inside the
/// threshold band.
inline double soft_threshold(double zeta, double eta) {
  if (zeta > eta) return zeta - eta;
  if (zeta < -eta) return zeta + eta;
  return 0.0;
}

/// Estimate of the difference image f^{l+1} - f^l for the adjacent pair
/// (l, l+1), with the lasso solve diagnostics at termination.
struct DiffEstimate {
  int lower_slice = 0;
  SliceImage image;
  int sweeps = 0;
  double kkt_violation = 0.0;
  bool converged = true;
};

/// p^{l+1} - p^l on rays valid in both slices; the returned plane flags the
/// combined validity.
std::pair<VectorXd, BoolGrid> projection_difference(const SinogramStack& sino,
                                                    int l);

struct LassoResult {
  VectorXd f;
  int sweeps = 0;
  double kkt_violation = 0.0;
  bool converged = true;
};

/// Cyclic coordinate descent from a zero start for
///   min_f  1/(2n) ||A f - p||^2 over valid rays  +  lambda2 ||f||_1,
/// with incremental residual updates so one coordinate costs one column pass.
/// Terminates when the largest coordinate change in a sweep drops below
/// `tolerance` or after `max_sweeps` sweeps (reported, not fatal).
LassoResult lasso_cd_core(const ColMajorSparse& columns, const VectorXd& p,
                          const BoolVector* valid, double lambda2, double n,
                          double tolerance, int max_sweeps);

/// Max KKT residual of the same objective at f: |g_j + lambda2 sign(f_j)| on
/// active coordinates and max(0, |g_j| - lambda2) on zero ones, where
/// g_j = (1/n) A_j^T (A f - p) over valid rays.
double lasso_kkt_violation(const ColMajorSparse& columns, const VectorXd& p,
                           const BoolVector* valid, double lambda2, double n,
                           const VectorXd& f);

/// Domain wrapper: lasso on a projection difference against the system
/// matrix, normalized per config.lasso_normalization.
DiffEstimate lasso_cd(const SparseSystemMatrix& matrix, const VectorXd& p_diff,
                      const BoolGrid& validity, double lambda2,
                      const ReconConfig& config);

}  // namespace sdrct
