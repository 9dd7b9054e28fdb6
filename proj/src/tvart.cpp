#include "sdrct/tvart.hpp"

#include <algorithm>
#include <stdexcept>

namespace sdrct {

void slice_solve_init(const SparseSystemMatrix& matrix, const VectorXd& p,
                      const bool* valid, const VectorXd& row_sq_norms,
                      const ReconConfig& config, SliceSolveState& state) {
  state.f.setZero();
  state.bb_has_previous = false;
  state.step = 1.0;
  kaczmarz_sweep_rows(matrix.weights, p, valid, config.alpha, row_sq_norms,
                      state.f);
}

void slice_solve_round(const SparseSystemMatrix& matrix, const VectorXd& p,
                       const bool* valid, const VectorXd& row_sq_norms,
                       const ReconConfig& config, SliceSolveState& state) {
  kaczmarz_sweep_rows(matrix.weights, p, valid, config.alpha, row_sq_norms,
                      state.f);
  if (config.lambda1 <= 0.0) return;

  const int L = matrix.geometry.side_length;
  SliceImage current(matrix.geometry);
  current.values = Eigen::Map<const ArrayXXd>(state.f.data(), L, L);
  SliceImage grad = tv_gradient(current, config.tv_epsilon,
                                config.tv_grad_variant);
  // BB pairs use the gradient of the term being descended, lambda1 * TV, so
  // the step stays scale-correct across the whole lambda1 range.
  const VectorXd grad_vec = config.lambda1 * grad.as_vector();

  if (state.bb_has_previous) {
    const VectorXd s = state.f - state.bb_prev_f;
    const VectorXd y = grad_vec - state.bb_prev_grad;
    state.step = bb1_step(s.squaredNorm(), s.dot(y), state.step);
  }
  state.bb_prev_f = state.f;
  state.bb_prev_grad = grad_vec;
  state.bb_has_previous = true;

  // Trust cap: one TV step may move no pixel by more than a quarter of the
  // iterate's value range, which keeps the BB sequence from oscillating when
  // the data sweeps keep perturbing it.
  const double grad_inf = grad_vec.lpNorm<Eigen::Infinity>();
  if (grad_inf > 0.0) {
    const double range = state.f.maxCoeff() - state.f.minCoeff();
    const double scale = range > 0.0 ? range : 1.0;
    state.step = std::min(state.step, 0.25 * scale / grad_inf);
  }

  state.f -= state.step * grad_vec;
}

SliceImage tvart_reconstruct(const SparseSystemMatrix& matrix,
                             const VectorXd& p, const BoolGrid* valid,
                             const ReconConfig& config, SliceTrace* trace) {
  config.validate();
  if (p.size() != matrix.geometry.ray_count()) {
    throw std::invalid_argument("tvart_reconstruct: ray length mismatch");
  }
  const VectorXd row_sq = row_squared_norms(matrix.weights);
  const bool* v = valid ? valid->data() : nullptr;

  SliceSolveState state(matrix.geometry.pixel_count());
  slice_solve_init(matrix, p, v, row_sq, config, state);
  for (int iter = 0; iter < config.max_outer_iterations; ++iter) {
    const VectorXd before = state.f;
    slice_solve_round(matrix, p, v, row_sq, config, state);
    state.f = state.f.cwiseMax(0.0);
    if (trace) {
      trace->delta_sq.push_back((state.f - before).squaredNorm());
      trace->prev_sq.push_back(before.squaredNorm());
    }
  }

  SliceImage image(matrix.geometry);
  image.as_vector() = state.f;
  return image;
}

}  // namespace sdrct
