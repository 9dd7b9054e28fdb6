#include "sdrct/sdr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sdrct/fusion.hpp"
#include "sdrct/parallel.hpp"
#include "sdrct/tvart.hpp"

namespace sdrct {

SdrResult sdr_reconstruct(const SinogramStack& sino,
                          const SparseSystemMatrix& matrix,
                          const ReconConfig& config, int threads) {
  config.validate();
  const auto& g = sino.geometry;
  if (!g.same_grid(matrix.geometry)) {
    throw std::invalid_argument("sdr_reconstruct: geometry mismatch");
  }
  if (g.slice_count < 2) {
    throw std::invalid_argument(
        "sdr_reconstruct: needs at least 2 slices; use tvart_reconstruct for "
        "single-slice stacks");
  }
  const int S = g.slice_count;
  const int workers = resolve_threads(threads);

  SdrResult result;

  // Step 1: difference estimates for all adjacent pairs.
  if (config.fusion_enabled) {
    result.diffs.resize(S - 1);
    parallel_for(S - 1, workers, [&](std::int64_t l) {
      auto [p_diff, validity] = projection_difference(sino, int(l));
      result.diffs[l] =
          lasso_cd(matrix, p_diff, validity, config.lambda2, config);
      result.diffs[l].lower_slice = int(l);
    });
  }

  // Step 2: per-slice Kaczmarz + TV rounds with Jacobi fusion between rounds.
  const VectorXd row_sq = row_squared_norms(matrix.weights);
  std::vector<VectorXd> ray_values(S);
  for (int l = 0; l < S; ++l) {
    ray_values[l] =
        Eigen::Map<const VectorXd>(sino.data[l].data(), sino.data[l].size());
  }

  std::vector<SliceSolveState> states;
  states.reserve(S);
  for (int l = 0; l < S; ++l) states.emplace_back(g.pixel_count());
  parallel_for(S, workers, [&](std::int64_t l) {
    slice_solve_init(matrix, ray_values[l], sino.mask.valid[l].data(), row_sq,
                     config, states[l]);
  });

  std::vector<SliceImage> previous_round(S, SliceImage(matrix.geometry));
  const int L = g.side_length;
  auto snapshot = [&] {
    for (int l = 0; l < S; ++l) {
      previous_round[l].values =
          Eigen::Map<const ArrayXXd>(states[l].f.data(), L, L);
    }
  };

  std::vector<SliceImage> staged(S, SliceImage(matrix.geometry));
  for (int round = 0; round < config.max_outer_iterations; ++round) {
    snapshot();
    // Phase 1: per-slice data sweep and TV step, staged for the fusion pass.
    parallel_for(S, workers, [&](std::int64_t l) {
      auto& state = states[l];
      slice_solve_round(matrix, ray_values[l], sino.mask.valid[l].data(),
                        row_sq, config, state);
      staged[l].values = Eigen::Map<const ArrayXXd>(state.f.data(), L, L);
    });
    // Phase 2: Jacobi fusion against the staged neighbor estimates, then the
    // nonnegativity clamp. Reading only staged values keeps every round
    // independent of slice processing order.
    parallel_for(S, workers, [&](std::int64_t l) {
      auto& state = states[l];
      if (config.fusion_enabled) {
        const bool has_lower = l > 0;
        const bool has_upper = l + 1 < S;
        SliceImage fused = fuse_slices(
            staged[l], has_lower ? &staged[l - 1] : nullptr,
            has_lower ? &result.diffs[l - 1].image : nullptr,
            has_upper ? &staged[l + 1] : nullptr,
            has_upper ? &result.diffs[l].image : nullptr,
            config.fusion_signs);
        state.f = fused.as_vector();
      }
      state.f = state.f.cwiseMax(0.0);
    });

    double delta_sq = 0.0, prev_sq = 0.0;
    for (int l = 0; l < S; ++l) {
      const auto prev =
          Eigen::Map<const VectorXd>(previous_round[l].values.data(),
                                     previous_round[l].values.size());
      delta_sq += (states[l].f - prev).squaredNorm();
      prev_sq += prev.squaredNorm();
    }
    const double change = prev_sq > 0.0
                              ? std::sqrt(delta_sq / prev_sq)
                              : std::numeric_limits<double>::infinity();
    result.relative_change.push_back(change);
    result.iterations = round + 1;
    if (change < config.convergence_threshold) {
      result.converged = true;
      break;
    }
  }

  result.volume = Volume(g);
  for (int l = 0; l < S; ++l) {
    result.volume.slices[l].values =
        Eigen::Map<const ArrayXXd>(states[l].f.data(), L, L);
  }
  return result;
}

}  // namespace sdrct
