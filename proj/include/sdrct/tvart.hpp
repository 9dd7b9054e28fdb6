#pragma once

#include "sdrct/config.hpp"
#include "sdrct/kaczmarz.hpp"
#include "sdrct/ossirt.hpp"
#include "sdrct/tv.hpp"

namespace sdrct {

/// Working state of one slice's Kaczmarz + TV outer loop, shared by TVART
/// and by the per-slice stage of the double-regularized reconstruction.
struct SliceSolveState {
  VectorXd f;  // current iterate, length L^2
  VectorXd bb_prev_f, bb_prev_grad;
  bool bb_has_previous = false;
  double step = 1.0;

  explicit SliceSolveState(Eigen::Index n) : f(VectorXd::Zero(n)) {}
};

/// Zero start followed by the Kaczmarz initialization pass.
void slice_solve_init(const SparseSystemMatrix& matrix, const VectorXd& p,
                      const bool* valid, const VectorXd& row_sq_norms,
                      const ReconConfig& config, SliceSolveState& state);

/// One outer round: a Kaczmarz sweep, then one BB total-variation descent
/// step with weight lambda1. No clamp; callers clamp after any fusion.
void slice_solve_round(const SparseSystemMatrix& matrix, const VectorXd& p,
                       const bool* valid, const VectorXd& row_sq_norms,
                       const ReconConfig& config, SliceSolveState& state);

/// ART interleaved with TV gradient descent: Kaczmarz initialization, then
/// max_outer_iterations rounds of (sweep, TV step, nonnegativity clamp).
SliceImage tvart_reconstruct(const SparseSystemMatrix& matrix,
                             const VectorXd& p, const BoolGrid* valid,
                             const ReconConfig& config,
                             SliceTrace* trace = nullptr);

}  // namespace sdrct
