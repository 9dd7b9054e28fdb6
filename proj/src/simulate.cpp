#include "sdrct/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "sdrct/parallel.hpp"
#include "sdrct/phantom.hpp"

namespace sdrct {

ArrayXd simulate_projection(const SliceImage& slice, double angle, double step,
                            int detector_count) {
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("simulate_projection: non-finite angle");
  }
  if (!(step > 0.0 && step <= 1.0)) {
    throw std::invalid_argument("simulate_projection: step must be in (0, 1]");
  }
  const int L = slice.geometry.side_length;
  const double h = slice.geometry.pixel_size;
  const int D = detector_count < 0 ? slice.geometry.detector_count : detector_count;

  const double ux = std::cos(angle), uy = std::sin(angle);
  const double nx = -uy, ny = ux;
  // Sample range covers the grid circumradius plus the bilinear support rim.
  const double reach = 0.5 * L * h * M_SQRT2 + h;
  const double ds = step * h;
  const int samples = int(std::ceil(2.0 * reach / ds));

  ArrayXd projection = ArrayXd::Zero(D);
  for (int d = 0; d < D; ++d) {
    const double t = (d - 0.5 * (D - 1)) * h;
    double sum = 0.0;
    for (int k = 0; k < samples; ++k) {
      const double s = -reach + (k + 0.5) * ds;
      const double x = t * nx + s * ux;
      const double y = t * ny + s * uy;
      // physical -> grid coordinates (integer = pixel center)
      sum += bilinear_sample(slice, x / h + 0.5 * (L - 1),
                             y / h + 0.5 * (L - 1));
    }
    projection[d] = sum * ds;
  }
  return projection;
}

SinogramStack simulate_sinogram(const Volume& volume, int angle_count,
                                double step, int threads) {
  const auto& vg = volume.geometry;
  GridGeometry g = GridGeometry::uniform(vg.side_length, angle_count,
                                         vg.slice_count, vg.pixel_size);
  SinogramStack sino(g);
  parallel_for(g.slice_count, resolve_threads(threads), [&](std::int64_t l) {
    for (int a = 0; a < g.angle_count; ++a) {
      sino.data[l].col(a) =
          simulate_projection(volume.slices[l], g.angles[a], step,
                              g.detector_count);
    }
  });
  return sino;
}

}  // namespace sdrct
