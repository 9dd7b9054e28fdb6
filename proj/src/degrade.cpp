#include "sdrct/degrade.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "sdrct/rng.hpp"

namespace sdrct {

namespace {
constexpr std::uint64_t kNoiseTag = 0x6e6f697365ULL;  // "noise"
constexpr std::uint64_t kEdgeTag = 0x6564676573ULL;   // "edges"
}  // namespace

BlankEdgeModel BlankEdgeModel::for_geometry(const GridGeometry& g) {
  BlankEdgeModel m;
  m.max_shift = int(std::ceil(0.05 * g.side_length));
  return m;
}

void BlankEdgeModel::validate(const GridGeometry& g) const {
  if (max_shift < 0) {
    throw std::invalid_argument("max_shift must be nonnegative");
  }
  if (2 * max_shift >= g.detector_count) {
    throw std::invalid_argument("max_shift must be below detector_count / 2");
  }
}

SinogramStack add_gaussian_noise(const SinogramStack& sino, double sigma,
                                 std::uint64_t seed) {
  if (sigma < 0.0 || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be nonnegative");
  }
  SinogramStack out = sino;
  if (sigma == 0.0) return out;

  const auto& g = sino.geometry;
  for (int a = 0; a < g.angle_count; ++a) {
    auto engine = make_engine(derive_seed(seed, kNoiseTag, std::uint64_t(a)));
    std::normal_distribution<double> normal(0.0, sigma);
    for (int l = 0; l < g.slice_count; ++l) {
      for (int d = 0; d < g.detector_count; ++d) {
        const double draw = normal(engine);
        if (out.mask.valid[l](d, a)) out.data[l](d, a) += draw;
      }
    }
  }
  return out;
}

SinogramStack apply_blank_edges(const SinogramStack& sino,
                                const BlankEdgeModel& model,
                                std::uint64_t seed) {
  const auto& g = sino.geometry;
  model.validate(g);
  SinogramStack out = sino;
  if (model.max_shift == 0) return out;

  const int D = g.detector_count;
  auto shared_engine = make_engine(derive_seed(seed, kEdgeTag, 0));
  std::uniform_int_distribution<int> uniform(0, model.max_shift);
  int shared_top = uniform(shared_engine);
  int shared_bottom = uniform(shared_engine);

  for (int a = 0; a < g.angle_count; ++a) {
    int top, bottom;
    if (model.per_angle) {
      auto engine = make_engine(derive_seed(seed, kEdgeTag, std::uint64_t(a)));
      top = uniform(engine);
      bottom = uniform(engine);
    } else {
      top = shared_top;
      bottom = shared_bottom;
    }
    if (top + bottom >= D) {
      throw std::invalid_argument("blank-edge shifts exceed detector row");
    }
    for (int l = 0; l < g.slice_count; ++l) {
      for (int d = 0; d < top; ++d) {
        out.mask.valid[l](d, a) = false;
        out.data[l](d, a) = 0.0;
      }
      for (int d = D - bottom; d < D; ++d) {
        out.mask.valid[l](d, a) = false;
        out.data[l](d, a) = 0.0;
      }
    }
  }
  return out;
}

}  // namespace sdrct
