#pragma once

#include <vector>

#include "sdrct/types.hpp"

namespace sdrct {

/// Axis-aligned ellipsoid rotated about z, in the normalized [-1,1]^3 cube.
struct Ellipsoid {
  double x0 = 0, y0 = 0, z0 = 0;  // center
  double a = 1, b = 1, c = 1;     // semi-axes
  double phi = 0;                 // rotation about z, radians
  double attenuation = 0;         // additive value inside

  bool contains(double x, double y, double z) const;
};

enum class SheppLoganContrast { modified, standard };

/// The standard 10-ellipsoid 3D Shepp-Logan table. `modified` uses the
/// high-contrast attenuation column; `standard` the original one.
const std::vector<Ellipsoid>& shepp_logan_ellipsoids(
    SheppLoganContrast contrast = SheppLoganContrast::modified);

/// Rasterizes the phantom on a cubic grid (slice_count == side_length) by
/// evaluating ellipsoid membership at voxel centers mapped onto [-1,1]^3.
/// Output is clamped to >= 0.
Volume shepp_logan_3d(const GridGeometry& geometry,
                      SheppLoganContrast contrast =
                          SheppLoganContrast::modified);

/// Bilinear interpolation of slice values at grid coordinates (x, y), where
/// integer coordinates are pixel centers. Out-of-grid nodes count as zero and
/// anything beyond half a pixel outside the grid returns 0.
double bilinear_sample(const SliceImage& slice, double x, double y);

}  // namespace sdrct
