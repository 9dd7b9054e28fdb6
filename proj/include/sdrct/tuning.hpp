#pragma once

#include <cstddef>
#include <vector>

#include "sdrct/config.hpp"
#include "sdrct/system_matrix.hpp"
#include "sdrct/types.hpp"

namespace sdrct {

struct LCurvePoint {
  double lambda = 0.0;
  double log_residual = 0.0;
  double log_penalty = 0.0;
};

/// Index of the interior point maximizing three-point Menger curvature.
/// Throws when fewer than 3 points or when the curve is degenerate (all
/// points coincide).
std::size_t l_curve_corner(const std::vector<LCurvePoint>& points);

/// TV-weight selection on one slice (default: the middle slice): runs the
/// TV-regularized baseline per candidate, records (log residual, log TV
/// penalty) and returns the L-curve corner candidate.
double l_curve_tune_lambda1(const SinogramStack& sino,
                            const SparseSystemMatrix& matrix,
                            const std::vector<double>& grid,
                            const ReconConfig& base, int slice = -1,
                            std::vector<LCurvePoint>* curve = nullptr,
                            int threads = 0);

struct GridSearchPoint {
  double lambda = 0.0;
  double score = 0.0;
};

/// Between-slice weight selection: for each candidate, a short (5-round)
/// double-regularized run on 3-slice windows around the probe slices
/// (defaults: 1/4, 1/2, 3/4 depth). Scores are -SNR against truth when it is
/// available, otherwise valid-ray residual plus lambda1-weighted TV. Returns
/// the argmin, ties toward the smaller candidate.
double grid_search_lambda2(const SinogramStack& sino,
                           const SparseSystemMatrix& matrix,
                           const std::vector<double>& grid,
                           const ReconConfig& base,
                           const Volume* truth = nullptr,
                           std::vector<int> probe_slices = {},
                           std::vector<GridSearchPoint>* curve = nullptr,
                           int threads = 0);

}  // namespace sdrct
