#include "sdrct/system_matrix.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sdrct/parallel.hpp"

namespace sdrct {

namespace {

// Ray for detector offset t at angle theta: P(s) = t*n + s*u with direction
// u = (cos, sin) and normal n = (-sin, cos). A ray lying exactly on a grid
// line contributes to the cell on its positive-normal side.
struct RayContext {
  int L;
  double h;
  double x0;  // == y0, grid is square and centered
};

template <typename Visit>
void trace_axis_aligned(const RayContext& rc, bool horizontal, double coord,
                        Visit&& visit) {
  // horizontal: u = (1, 0), n = (0, 1); vertical: u = (0, 1), n = (-1, 0).
  const double pos = (coord - rc.x0) / rc.h;
  const double rounded = std::round(pos);
  int cell;
  if (std::abs(pos - rounded) < 1e-12 * std::max(1.0, std::abs(pos))) {
    cell = horizontal ? int(rounded) : int(rounded) - 1;
  } else {
    cell = int(std::floor(pos));
  }
  if (cell < 0 || cell >= rc.L) return;
  for (int k = 0; k < rc.L; ++k) {
    const int ix = horizontal ? k : cell;
    const int iy = horizontal ? cell : k;
    visit(iy * rc.L + ix, rc.h);
  }
}

template <typename Visit>
void trace_ray(const GridGeometry& g, double cos_t, double sin_t, double t,
               Visit&& visit) {
  const RayContext rc{g.side_length, g.pixel_size,
                      -0.5 * g.side_length * g.pixel_size};
  const double ux = cos_t, uy = sin_t;
  const double px = -t * sin_t, py = t * cos_t;
  const double lo = rc.x0, hi = -rc.x0;

  if (uy == 0.0) {
    if (py >= lo && py <= hi) trace_axis_aligned(rc, true, py, visit);
    return;
  }
  if (ux == 0.0) {
    if (px >= lo && px <= hi) trace_axis_aligned(rc, false, px, visit);
    return;
  }

  // Slab clip against the grid square.
  double smin = -std::numeric_limits<double>::infinity();
  double smax = std::numeric_limits<double>::infinity();
  {
    const double sa = (lo - px) / ux, sb = (hi - px) / ux;
    smin = std::max(smin, std::min(sa, sb));
    smax = std::min(smax, std::max(sa, sb));
  }
  {
    const double sa = (lo - py) / uy, sb = (hi - py) / uy;
    smin = std::max(smin, std::min(sa, sb));
    smax = std::min(smax, std::max(sa, sb));
  }
  if (!(smin < smax)) return;

  // All gridline crossings inside (smin, smax), each axis already ordered by
  // increasing s, then merged; cells are identified by segment midpoints.
  std::vector<double> sx, sy;
  sx.reserve(rc.L + 1);
  sy.reserve(rc.L + 1);
  for (int k = 0; k <= rc.L; ++k) {
    const double s = (rc.x0 + k * rc.h - px) / ux;
    if (s > smin && s < smax) sx.push_back(s);
  }
  if (ux < 0) std::reverse(sx.begin(), sx.end());
  for (int k = 0; k <= rc.L; ++k) {
    const double s = (rc.x0 + k * rc.h - py) / uy;
    if (s > smin && s < smax) sy.push_back(s);
  }
  if (uy < 0) std::reverse(sy.begin(), sy.end());

  std::vector<double> breaks;
  breaks.reserve(sx.size() + sy.size() + 2);
  breaks.push_back(smin);
  std::merge(sx.begin(), sx.end(), sy.begin(), sy.end(),
             std::back_inserter(breaks));
  breaks.push_back(smax);

  // Corner slivers can re-identify the previous cell; merge consecutive
  // visits so every pixel appears once per row.
  int last_pixel = -1;
  double accumulated = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double ds = breaks[i + 1] - breaks[i];
    if (!(ds > 0.0)) continue;
    const double sm = 0.5 * (breaks[i] + breaks[i + 1]);
    int ix = int(std::floor((px + sm * ux - rc.x0) / rc.h));
    int iy = int(std::floor((py + sm * uy - rc.x0) / rc.h));
    ix = std::clamp(ix, 0, rc.L - 1);
    iy = std::clamp(iy, 0, rc.L - 1);
    const int pixel = iy * rc.L + ix;
    if (pixel == last_pixel) {
      accumulated += ds;
      continue;
    }
    if (last_pixel >= 0) visit(last_pixel, accumulated);
    last_pixel = pixel;
    accumulated = ds;
  }
  if (last_pixel >= 0) visit(last_pixel, accumulated);
}

}  // namespace

SparseSystemMatrix build_system_matrix(const GridGeometry& geometry,
                                       int threads) {
  geometry.validate();
  const int A = geometry.angle_count;
  const int D = geometry.detector_count;
  const std::int64_t row_count = std::int64_t(A) * D;

  std::vector<std::vector<std::pair<int, double>>> rows(row_count);
  parallel_for(row_count, resolve_threads(threads), [&](std::int64_t i) {
    const int a = int(i / D);
    const int d = int(i % D);
    const double theta = geometry.angles[a];
    const double t = (d - 0.5 * (D - 1)) * geometry.pixel_size;
    auto& row = rows[i];
    trace_ray(geometry, std::cos(theta), std::sin(theta), t,
              [&](int pixel, double length) {
                row.emplace_back(pixel, length);
              });
    std::sort(row.begin(), row.end());
    auto out = row.begin();
    for (auto it = row.begin(); it != row.end(); ++it) {
      if (out != row.begin() && std::prev(out)->first == it->first) {
        std::prev(out)->second += it->second;
      } else {
        *out++ = *it;
      }
    }
    row.erase(out, row.end());
  });

  SparseSystemMatrix matrix;
  matrix.geometry = geometry;
  matrix.weights.resize(row_count, geometry.pixel_count());
  Eigen::VectorXi per_row(row_count);
  for (std::int64_t i = 0; i < row_count; ++i) per_row[i] = int(rows[i].size());
  matrix.weights.reserve(per_row);
  for (std::int64_t i = 0; i < row_count; ++i) {
    for (const auto& [pixel, length] : rows[i]) {
      matrix.weights.insert(int(i), pixel) = length;
    }
  }
  matrix.weights.makeCompressed();
  return matrix;
}

std::uint64_t estimate_system_matrix_bytes(const GridGeometry& geometry) {
  geometry.validate();
  const int A = geometry.angle_count;
  const int D = geometry.detector_count;
  const std::int64_t row_count = std::int64_t(A) * D;
  std::atomic<std::uint64_t> nnz{0};
  parallel_for(row_count, resolve_threads(0), [&](std::int64_t i) {
    const int a = int(i / D);
    const int d = int(i % D);
    const double theta = geometry.angles[a];
    const double t = (d - 0.5 * (D - 1)) * geometry.pixel_size;
    std::uint64_t count = 0;
    trace_ray(geometry, std::cos(theta), std::sin(theta), t,
              [&](int, double) { ++count; });
    nnz += count;
  });
  return nnz * (sizeof(int) + sizeof(double)) +
         std::uint64_t(row_count + 1) * sizeof(int);
}

VectorXd forward_project(const SparseSystemMatrix& matrix,
                         const SliceImage& slice, const BoolGrid* valid) {
  if (!slice.geometry.same_grid(matrix.geometry)) {
    throw std::invalid_argument("forward_project: geometry mismatch");
  }
  VectorXd p = matrix.weights * slice.as_vector().matrix();
  if (valid) {
    if (valid->size() != p.size()) {
      throw std::invalid_argument("forward_project: mask size mismatch");
    }
    const bool* v = valid->data();
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (!v[i]) p[i] = 0.0;
    }
  }
  return p;
}

SliceImage back_project(const SparseSystemMatrix& matrix,
                        const VectorXd& ray_values, const BoolGrid* valid) {
  if (ray_values.size() != matrix.geometry.ray_count()) {
    throw std::invalid_argument("back_project: ray vector length mismatch");
  }
  SliceImage image(matrix.geometry);
  auto out = image.as_vector();
  const bool* v = valid ? valid->data() : nullptr;
  if (v && valid->size() != ray_values.size()) {
    throw std::invalid_argument("back_project: mask size mismatch");
  }
  for (int i = 0; i < matrix.weights.outerSize(); ++i) {
    if (v && !v[i]) continue;
    const double value = ray_values[i];
    if (value == 0.0) continue;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor, int>::InnerIterator it(
             matrix.weights, i);
         it; ++it) {
      out[it.col()] += value * it.value();
    }
  }
  return image;
}

}  // namespace sdrct
