#pragma once

#include "sdrct/config.hpp"
#include "sdrct/system_matrix.hpp"
#include "sdrct/types.hpp"

namespace sdrct {

/// Per-round squared change / squared previous-iterate norm of one slice's
/// outer loop; summing across slices yields the volume-level relative L2
/// change trace.
struct SliceTrace {
  std::vector<double> delta_sq;
  std::vector<double> prev_sq;
};

/// Ordered-subset SIRT. Subset k takes angles k, k+S, k+2S, ...; row and
/// column sums are computed over valid rays only. Runs
/// config.max_outer_iterations full passes with a nonnegativity clamp after
/// each pass. Subsets with no valid ray are skipped and counted.
SliceImage ossirt_reconstruct(const SparseSystemMatrix& matrix,
                              const VectorXd& p, const BoolGrid* valid,
                              const ReconConfig& config,
                              SliceTrace* trace = nullptr,
                              int* skipped_subsets = nullptr);

}  // namespace sdrct
