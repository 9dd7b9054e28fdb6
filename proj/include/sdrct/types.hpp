#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace sdrct {

using Eigen::ArrayXd;
using Eigen::ArrayXXd;
using Eigen::VectorXd;

using BoolGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Parallel-beam scan geometry shared by images, sinograms and the system
/// matrix. Angles are equally spaced on [0, pi); detector bins are centered
/// on the grid center with spacing equal to pixel_size.
struct GridGeometry {
  int side_length = 0;  // L, pixels per slice edge
  double pixel_size = 1.0;
  int angle_count = 0;
  std::vector<double> angles;  // radians, strictly increasing, uniform spacing
  int detector_count = 0;
  int slice_count = 1;

  /// Builds a geometry with angle k at k*pi/angle_count.
  /// detector_count < 0 means "use side_length".
  static GridGeometry uniform(int side_length, int angle_count,
                              int slice_count = 1, double pixel_size = 1.0,
                              int detector_count = -1);

  void validate() const;

  std::int64_t ray_count() const {
    return std::int64_t(angle_count) * detector_count;
  }
  std::int64_t pixel_count() const {
    return std::int64_t(side_length) * side_length;
  }

  /// Same slice grid and ray layout (slice_count not compared).
  bool same_grid(const GridGeometry& o) const;
};

/// One L x L slice of linear attenuation. Storage is column-major with x
/// fastest, so the linear pixel index j = y*L + x matches both the on-disk
/// order and the system-matrix column order.
struct SliceImage {
  GridGeometry geometry;
  ArrayXXd values;  // (L, L), indexed values(x, y)

  SliceImage() = default;
  explicit SliceImage(const GridGeometry& g)
      : geometry(g), values(ArrayXXd::Zero(g.side_length, g.side_length)) {}
  SliceImage(const GridGeometry& g, ArrayXXd v)
      : geometry(g), values(std::move(v)) {}

  Eigen::Map<VectorXd> as_vector() {
    return Eigen::Map<VectorXd>(values.data(), values.size());
  }
  Eigen::Map<const VectorXd> as_vector() const {
    return Eigen::Map<const VectorXd>(values.data(), values.size());
  }
};

/// Slice stack, top-to-bottom index l = 0..slice_count-1.
struct Volume {
  GridGeometry geometry;
  std::vector<SliceImage> slices;

  Volume() = default;
  explicit Volume(const GridGeometry& g) : geometry(g) {
    slices.assign(g.slice_count, SliceImage(g));
  }
};

/// Per-ray validity, slice_count planes of shape (detector, angle).
/// Invalid bins form contiguous runs at the detector edges, never holes.
struct BlankEdgeMask {
  std::vector<BoolGrid> valid;  // valid[l](d, a)

  static BlankEdgeMask all_valid(const GridGeometry& g);
  void validate_edges() const;
  bool all() const;
};

/// Log-domain projection stack; data[l](d, a) is the line integral of slice l
/// along ray (angle a, detector d). Masked-invalid entries carry value 0.
struct SinogramStack {
  GridGeometry geometry;
  std::vector<ArrayXXd> data;  // data[l] is (detector_count, angle_count)
  BlankEdgeMask mask;

  SinogramStack() = default;
  explicit SinogramStack(const GridGeometry& g)
      : geometry(g), mask(BlankEdgeMask::all_valid(g)) {
    data.assign(g.slice_count,
                ArrayXXd::Zero(g.detector_count, g.angle_count));
  }

  /// Zeroes every entry whose mask bit is invalid.
  void zero_invalid();
  void validate() const;
};

}  // namespace sdrct
