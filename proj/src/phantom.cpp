#include "sdrct/phantom.hpp"

#include <cmath>
#include <stdexcept>

namespace sdrct {

bool Ellipsoid::contains(double x, double y, double z) const {
  const double dx = x - x0;
  const double dy = y - y0;
  const double dz = z - z0;
  const double cp = std::cos(phi);
  const double sp = std::sin(phi);
  // Rotate the point into the ellipsoid frame (inverse rotation about z).
  const double u = cp * dx + sp * dy;
  const double v = -sp * dx + cp * dy;
  const double q = (u / a) * (u / a) + (v / b) * (v / b) + (dz / c) * (dz / c);
  return q <= 1.0;
}

const std::vector<Ellipsoid>& shepp_logan_ellipsoids(
    SheppLoganContrast contrast) {
  constexpr double deg = M_PI / 180.0;
  // Kak-Slaney style table: {x0, y0, z0, a, b, c, phi, A}.
  static const std::vector<Ellipsoid> modified = {
      {0.0, 0.0, 0.0, 0.69, 0.92, 0.81, 0.0, 1.0},
      {0.0, -0.0184, 0.0, 0.6624, 0.874, 0.78, 0.0, -0.8},
      {0.22, 0.0, 0.0, 0.11, 0.31, 0.22, -18.0 * deg, -0.2},
      {-0.22, 0.0, 0.0, 0.16, 0.41, 0.28, 18.0 * deg, -0.2},
      {0.0, 0.35, -0.15, 0.21, 0.25, 0.41, 0.0, 0.1},
      {0.0, 0.1, 0.25, 0.046, 0.046, 0.05, 0.0, 0.1},
      {0.0, -0.1, 0.25, 0.046, 0.046, 0.05, 0.0, 0.1},
      {-0.08, -0.605, 0.0, 0.046, 0.023, 0.05, 0.0, 0.1},
      {0.0, -0.606, 0.0, 0.023, 0.023, 0.02, 0.0, 0.1},
      {0.06, -0.605, 0.0, 0.023, 0.046, 0.02, 0.0, 0.1},
  };
  static const std::vector<Ellipsoid> standard = [] {
    std::vector<Ellipsoid> t = modified;
    const double attenuations[10] = {2.0, -0.98, -0.02, -0.02, 0.01,
                                     0.01, 0.01,  0.01,  0.01,  0.01};
    for (int i = 0; i < 10; ++i) t[i].attenuation = attenuations[i];
    return t;
  }();
  return contrast == SheppLoganContrast::modified ? modified : standard;
}

Volume shepp_logan_3d(const GridGeometry& geometry,
                      SheppLoganContrast contrast) {
  geometry.validate();
  if (geometry.slice_count != geometry.side_length) {
    throw std::invalid_argument(
        "shepp_logan_3d requires a cubic geometry (slice_count == "
        "side_length)");
  }
  const int L = geometry.side_length;
  const auto& table = shepp_logan_ellipsoids(contrast);

  Volume volume(geometry);
  auto coord = [L](int i) { return (2.0 * i + 1.0) / L - 1.0; };
  for (int l = 0; l < L; ++l) {
    const double z = coord(l);
    ArrayXXd& plane = volume.slices[l].values;
    for (int iy = 0; iy < L; ++iy) {
      const double y = coord(iy);
      for (int ix = 0; ix < L; ++ix) {
        const double x = coord(ix);
        double value = 0.0;
        for (const auto& e : table) {
          if (e.contains(x, y, z)) value += e.attenuation;
        }
        plane(ix, iy) = value > 0.0 ? value : 0.0;
      }
    }
  }
  return volume;
}

double bilinear_sample(const SliceImage& slice, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw std::invalid_argument("bilinear_sample requires finite coordinates");
  }
  const ArrayXXd& f = slice.values;
  const int L = int(f.rows());
  if (x < -0.5 || x > L - 0.5 || y < -0.5 || y > L - 0.5) return 0.0;

  const int kx = int(std::floor(x));
  const int ky = int(std::floor(y));
  const double tx = x - kx;
  const double ty = y - ky;
  auto node = [&](int ix, int iy) -> double {
    if (ix < 0 || iy < 0 || ix >= L || iy >= L) return 0.0;
    return f(ix, iy);
  };
  return (1 - tx) * (1 - ty) * node(kx, ky) +
         tx * (1 - ty) * node(kx + 1, ky) +
         (1 - tx) * ty * node(kx, ky + 1) +
         tx * ty * node(kx + 1, ky + 1);
}

}  // namespace sdrct
