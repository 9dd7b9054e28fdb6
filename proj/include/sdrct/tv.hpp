#pragma once

#include "sdrct/config.hpp"
#include "sdrct/types.hpp"

namespace sdrct {

/// Gradient of the smoothed total variation sum_{x,y} sqrt(eps + |grad f|^2)
/// with backward differences and replicated (clamped) boundary values. The
/// symmetric variant is the exact gradient of that functional; as_printed
/// repeats the x-difference in the third numerator.
SliceImage tv_gradient(const SliceImage& slice, double epsilon,
                       TvGradVariant variant = TvGradVariant::symmetric);

/// Unsmoothed TV norm sum_{x,y} |grad f| with the same difference scheme.
double tv_norm(const SliceImage& slice);

/// Iterate/gradient pairs feeding the Barzilai-Borwein step.
struct TVState {
  SliceImage current, previous;
  SliceImage current_gradient, previous_gradient;
  double step = 1.0;
  bool has_previous = false;
};

/// BB1 step <s,s>/<s,y> from raw inner products; falls back to half the
/// previous step (floor 1e-8) when <s,y> <= 0 or the quotient is not finite.
double bb1_step(double ss, double sy, double previous_step);

/// BB1 step from the state's (current - previous) iterate and gradient pairs;
/// stores the result in state.step and returns it.
double bb_step(TVState& state);

}  // namespace sdrct
