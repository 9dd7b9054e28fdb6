#include "sdrct/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sdrct/metrics.hpp"
#include "sdrct/parallel.hpp"
#include "sdrct/sdr.hpp"
#include "sdrct/tv.hpp"
#include "sdrct/tvart.hpp"

namespace sdrct {

namespace {

double safe_log(double x) { return std::log(std::max(x, 1e-300)); }

double menger_curvature(const LCurvePoint& a, const LCurvePoint& b,
                        const LCurvePoint& c) {
  const double abx = b.log_residual - a.log_residual;
  const double aby = b.log_penalty - a.log_penalty;
  const double acx = c.log_residual - a.log_residual;
  const double acy = c.log_penalty - a.log_penalty;
  const double bcx = c.log_residual - b.log_residual;
  const double bcy = c.log_penalty - b.log_penalty;
  const double ab = std::hypot(abx, aby);
  const double ac = std::hypot(acx, acy);
  const double bc = std::hypot(bcx, bcy);
  if (ab == 0.0 || ac == 0.0 || bc == 0.0) return -1.0;  // degenerate triple
  const double doubled_area = std::abs(abx * acy - aby * acx);
  return 2.0 * doubled_area / (ab * ac * bc);
}

double masked_residual_norm(const SparseSystemMatrix& matrix,
                            const VectorXd& f, const VectorXd& p,
                            const BoolGrid& valid) {
  VectorXd r = matrix.weights * f - p;
  const bool* v = valid.data();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (v[i]) sum += r[i] * r[i];
  }
  return std::sqrt(sum);
}

/// Copy of a contiguous slice window [lo, hi) of a stack.
SinogramStack slice_window(const SinogramStack& sino, int lo, int hi) {
  GridGeometry g = sino.geometry;
  g.slice_count = hi - lo;
  SinogramStack out(g);
  for (int l = lo; l < hi; ++l) {
    out.data[l - lo] = sino.data[l];
    out.mask.valid[l - lo] = sino.mask.valid[l];
  }
  return out;
}

}  // namespace

std::size_t l_curve_corner(const std::vector<LCurvePoint>& points) {
  if (points.size() < 3) {
    throw std::invalid_argument(
        "l_curve_corner: need at least 3 grid points (curvature undefined)");
  }
  double best = -1.0;
  std::size_t best_index = 0;
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    const double k = menger_curvature(points[i - 1], points[i], points[i + 1]);
    if (k > best) {
      best = k;
      best_index = i;
    }
  }
  if (best < 0.0) {
    throw std::invalid_argument(
        "l_curve_corner: curvature undefined on a degenerate curve");
  }
  return best_index;
}

double l_curve_tune_lambda1(const SinogramStack& sino,
                            const SparseSystemMatrix& matrix,
                            const std::vector<double>& grid,
                            const ReconConfig& base, int slice,
                            std::vector<LCurvePoint>* curve, int threads) {
  if (grid.size() < 3) {
    throw std::invalid_argument(
        "l_curve_tune_lambda1: need at least 3 grid points (curvature "
        "undefined)");
  }
  if (slice < 0) slice = sino.geometry.slice_count / 2;
  if (slice >= sino.geometry.slice_count) {
    throw std::invalid_argument("l_curve_tune_lambda1: slice out of range");
  }
  const VectorXd p = Eigen::Map<const VectorXd>(sino.data[slice].data(),
                                                sino.data[slice].size());
  const BoolGrid& valid = sino.mask.valid[slice];

  std::vector<LCurvePoint> points(grid.size());
  parallel_for(std::int64_t(grid.size()), resolve_threads(threads),
               [&](std::int64_t i) {
                 ReconConfig config = base;
                 config.lambda1 = grid[i];
                 SliceImage recon =
                     tvart_reconstruct(matrix, p, &valid, config);
                 points[i].lambda = grid[i];
                 points[i].log_residual = safe_log(
                     masked_residual_norm(matrix, recon.as_vector(), p, valid));
                 points[i].log_penalty = safe_log(tv_norm(recon));
               });
  if (curve) *curve = points;
  return points[l_curve_corner(points)].lambda;
}

double grid_search_lambda2(const SinogramStack& sino,
                           const SparseSystemMatrix& matrix,
                           const std::vector<double>& grid,
                           const ReconConfig& base, const Volume* truth,
                           std::vector<int> probe_slices,
                           std::vector<GridSearchPoint>* curve, int threads) {
  if (grid.empty()) {
    throw std::invalid_argument("grid_search_lambda2: empty grid");
  }
  const int S = sino.geometry.slice_count;
  if (S < 2) {
    throw std::invalid_argument("grid_search_lambda2: needs >= 2 slices");
  }
  if (probe_slices.empty()) {
    probe_slices = {S / 4, S / 2, 3 * S / 4};
  }
  std::sort(probe_slices.begin(), probe_slices.end());
  probe_slices.erase(
      std::unique(probe_slices.begin(), probe_slices.end()),
      probe_slices.end());
  for (int l : probe_slices) {
    if (l < 0 || l >= S) {
      throw std::invalid_argument("grid_search_lambda2: probe slice range");
    }
  }

  std::vector<GridSearchPoint> points(grid.size());
  parallel_for(
      std::int64_t(grid.size()), resolve_threads(threads),
      [&](std::int64_t i) {
        ReconConfig config = base;
        config.lambda2 = grid[i];
        config.max_outer_iterations = 5;
        config.convergence_threshold = 0.0;  // run all probe rounds
        double score = 0.0;
        for (int probe : probe_slices) {
          const int lo = std::max(0, probe - 1);
          const int hi = std::min(S, probe + 2);
          SinogramStack window = slice_window(sino, lo, hi);
          SdrResult run = sdr_reconstruct(window, matrix, config, 1);
          const SliceImage& recon = run.volume.slices[probe - lo];
          if (truth) {
            score -= snr_db(recon, truth->slices[probe]);
          } else {
            const VectorXd p = Eigen::Map<const VectorXd>(
                sino.data[probe].data(), sino.data[probe].size());
            score += masked_residual_norm(matrix, recon.as_vector(), p,
                                          sino.mask.valid[probe]) +
                     config.lambda1 * tv_norm(recon);
          }
        }
        points[i].lambda = grid[i];
        points[i].score = score;
      });
  if (curve) *curve = points;

  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].score < points[best].score ||
        (points[i].score == points[best].score &&
         points[i].lambda < points[best].lambda)) {
      best = i;
    }
  }
  return points[best].lambda;
}

}  // namespace sdrct
