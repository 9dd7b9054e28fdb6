#include "sdrct/types.hpp"

#include <cmath>
#include <stdexcept>

namespace sdrct {

GridGeometry GridGeometry::uniform(int side_length, int angle_count,
                                   int slice_count, double pixel_size,
                                   int detector_count) {
  GridGeometry g;
  g.side_length = side_length;
  g.pixel_size = pixel_size;
  g.angle_count = angle_count;
  g.detector_count = detector_count < 0 ? side_length : detector_count;
  g.slice_count = slice_count;
  g.angles.resize(angle_count > 0 ? angle_count : 0);
  for (int k = 0; k < angle_count; ++k) {
    g.angles[k] = k * M_PI / angle_count;
  }
  g.validate();
  return g;
}

void GridGeometry::validate() const {
  if (side_length < 1) throw std::invalid_argument("side_length must be >= 1");
  if (pixel_size <= 0.0 || !std::isfinite(pixel_size)) {
    throw std::invalid_argument("pixel_size must be positive");
  }
  if (angle_count < 1) throw std::invalid_argument("angle_count must be >= 1");
  if (detector_count < 1) {
    throw std::invalid_argument("detector_count must be >= 1");
  }
  if (slice_count < 1) throw std::invalid_argument("slice_count must be >= 1");
  if (int(angles.size()) != angle_count) {
    throw std::invalid_argument("angles length does not match angle_count");
  }
  for (int k = 1; k < angle_count; ++k) {
    if (!(angles[k] > angles[k - 1])) {
      throw std::invalid_argument("angles must be strictly increasing");
    }
  }
  if (angle_count > 1) {
    const double spacing = angles[1] - angles[0];
    for (int k = 1; k < angle_count; ++k) {
      if (std::abs((angles[k] - angles[k - 1]) - spacing) > 1e-12) {
        throw std::invalid_argument("angle spacing must be uniform");
      }
    }
  }
}

bool GridGeometry::same_grid(const GridGeometry& o) const {
  return side_length == o.side_length && pixel_size == o.pixel_size &&
         angle_count == o.angle_count && detector_count == o.detector_count &&
         angles == o.angles;
}

BlankEdgeMask BlankEdgeMask::all_valid(const GridGeometry& g) {
  BlankEdgeMask m;
  m.valid.assign(g.slice_count,
                 BoolGrid::Constant(g.detector_count, g.angle_count, true));
  return m;
}

void BlankEdgeMask::validate_edges() const {
  for (const auto& plane : valid) {
    for (Eigen::Index a = 0; a < plane.cols(); ++a) {
      const Eigen::Index d_count = plane.rows();
      Eigen::Index first = -1, last = -1;
      for (Eigen::Index d = 0; d < d_count; ++d) {
        if (plane(d, a)) {
          if (first < 0) first = d;
          last = d;
        }
      }
      if (first < 0) continue;  // all invalid: degenerate but edge-shaped
      for (Eigen::Index d = first; d <= last; ++d) {
        if (!plane(d, a)) {
          throw std::invalid_argument(
              "blank-edge mask has an interior hole (non-edge invalid run)");
        }
      }
    }
  }
}

bool BlankEdgeMask::all() const {
  for (const auto& plane : valid) {
    if (!plane.all()) return false;
  }
  return true;
}

void SinogramStack::zero_invalid() {
  for (std::size_t l = 0; l < data.size(); ++l) {
    data[l] = mask.valid[l].select(data[l], 0.0);
  }
}

void SinogramStack::validate() const {
  if (int(data.size()) != geometry.slice_count ||
      int(mask.valid.size()) != geometry.slice_count) {
    throw std::invalid_argument("sinogram slice count mismatch");
  }
  for (int l = 0; l < geometry.slice_count; ++l) {
    if (data[l].rows() != geometry.detector_count ||
        data[l].cols() != geometry.angle_count ||
        mask.valid[l].rows() != geometry.detector_count ||
        mask.valid[l].cols() != geometry.angle_count) {
      throw std::invalid_argument("sinogram plane shape mismatch");
    }
    if (!data[l].isFinite().all()) {
      throw std::invalid_argument("sinogram has non-finite entries");
    }
  }
  mask.validate_edges();
}

}  // namespace sdrct
