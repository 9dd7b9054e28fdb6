#include "sdrct/tv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdrct {

namespace {

inline double clamped(const ArrayXXd& f, int x, int y) {
  const int L = int(f.rows());
  return f(std::clamp(x, 0, L - 1), std::clamp(y, 0, L - 1));
}

}  // namespace

SliceImage tv_gradient(const SliceImage& slice, double epsilon,
                       TvGradVariant variant) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("tv_gradient: epsilon must be positive");
  }
  const ArrayXXd& f = slice.values;
  const int L = int(f.rows());
  SliceImage grad(slice.geometry);

  auto dx = [&](int x, int y) { return clamped(f, x, y) - clamped(f, x - 1, y); };
  auto dy = [&](int x, int y) { return clamped(f, x, y) - clamped(f, x, y - 1); };
  auto den = [&](int x, int y) {
    const double gx = dx(x, y), gy = dy(x, y);
    return std::sqrt(epsilon + gx * gx + gy * gy);
  };

  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      const double third = variant == TvGradVariant::symmetric
                               ? dy(x, y + 1)
                               : dx(x + 1, y);
      grad.values(x, y) = (dx(x, y) + dy(x, y)) / den(x, y) -
                          dx(x + 1, y) / den(x + 1, y) -
                          third / den(x, y + 1);
    }
  }
  return grad;
}

double tv_norm(const SliceImage& slice) {
  const ArrayXXd& f = slice.values;
  const int L = int(f.rows());
  double sum = 0.0;
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      const double gx = clamped(f, x, y) - clamped(f, x - 1, y);
      const double gy = clamped(f, x, y) - clamped(f, x, y - 1);
      sum += std::sqrt(gx * gx + gy * gy);
    }
  }
  return sum;
}

double bb1_step(double ss, double sy, double previous_step) {
  if (sy > 0.0) {
    const double step = ss / sy;
    if (std::isfinite(step) && step > 0.0) return step;
  }
  return std::max(0.5 * previous_step, 1e-8);
}

double bb_step(TVState& state) {
  const auto s =
      (state.current.values - state.previous.values).matrix().reshaped();
  const auto y = (state.current_gradient.values -
                  state.previous_gradient.values)
                     .matrix()
                     .reshaped();
  state.step = bb1_step(s.squaredNorm(), s.dot(y), state.step);
  return state.step;
}

}  // namespace sdrct
