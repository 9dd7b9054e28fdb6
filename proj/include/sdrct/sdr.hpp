#pragma once

#include <vector>

#include "sdrct/config.hpp"
#include "sdrct/lasso.hpp"
#include "sdrct/system_matrix.hpp"
#include "sdrct/types.hpp"

namespace sdrct {

struct SdrResult {
  Volume volume;
  std::vector<double> relative_change;  // one entry per outer round
  std::vector<DiffEstimate> diffs;      // adjacent-pair estimates, size S-1
  int iterations = 0;
  bool converged = false;
};

/// Double-regularized multi-slice reconstruction. Step 1 solves the lasso on
/// every adjacent projection difference. Step 2 initializes each slice with a
/// Kaczmarz pass, then per round runs a Kaczmarz sweep, a BB TV descent step,
/// the three-estimate slice fusion against the previous round's neighbors
/// (Jacobi, so slice order never matters), and a nonnegativity clamp. Stops
/// early once the volume-wide relative L2 change drops below
/// config.convergence_threshold.
SdrResult sdr_reconstruct(const SinogramStack& sino,
                          const SparseSystemMatrix& matrix,
                          const ReconConfig& config, int threads = 0);

}  // namespace sdrct
