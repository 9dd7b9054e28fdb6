#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sdrct/fbp.hpp"
#include "sdrct/kaczmarz.hpp"
#include "sdrct/metrics.hpp"
#include "sdrct/ossirt.hpp"
#include "sdrct/system_matrix.hpp"
#include "sdrct/tv.hpp"
#include "sdrct/tvart.hpp"

using namespace sdrct;

namespace {

ArrayXXd analytic_disk_sinogram(const GridGeometry& g, double radius,
                                double mu) {
  ArrayXXd sino(g.detector_count, g.angle_count);
  for (int a = 0; a < g.angle_count; ++a) {
    for (int d = 0; d < g.detector_count; ++d) {
      const double t = (d - 0.5 * (g.detector_count - 1)) * g.pixel_size;
      sino(d, a) = std::abs(t) < radius
                       ? 2.0 * mu * std::sqrt(radius * radius - t * t)
                       : 0.0;
    }
  }
  return sino;
}

SliceImage disk_image(const GridGeometry& g, double radius, double mu) {
  SliceImage disk(g);
  const double c = 0.5 * (g.side_length - 1);
  for (int y = 0; y < g.side_length; ++y) {
    for (int x = 0; x < g.side_length; ++x) {
      const double r = std::hypot(x - c, y - c);
      disk.values(x, y) = r <= radius ? mu : 0.0;
    }
  }
  return disk;
}

RowMajorSparse dense_to_sparse(const Eigen::MatrixXd& A) {
  RowMajorSparse W(A.rows(), A.cols());
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) {
      if (A(i, j) != 0.0) W.insert(i, j) = A(i, j);
    }
  }
  W.makeCompressed();
  return W;
}

}  // namespace

TEST_CASE("fbp: zero sinogram gives a zero image") {
  auto g = GridGeometry::uniform(32, 24, 1);
  ArrayXXd zeros = ArrayXXd::Zero(32, 24);
  CHECK(fbp_reconstruct(zeros, g).values.abs().maxCoeff() == 0.0);
  auto single = GridGeometry::uniform(32, 1, 1);
  CHECK_THROWS_AS(fbp_reconstruct(ArrayXXd::Zero(32, 1), single),
                  std::invalid_argument);
}

TEST_CASE("fbp: analytic disk reconstructs the attenuation level") {
  const int L = 64;
  auto g = GridGeometry::uniform(L, 180, 1);
  const double radius = 20.0, mu = 0.8;
  const SliceImage recon =
      fbp_reconstruct(analytic_disk_sinogram(g, radius, mu), g);

  const double c = 0.5 * (L - 1);
  double interior = 0.0, exterior = 0.0;
  int ni = 0, ne = 0;
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      const double r = std::hypot(x - c, y - c);
      if (r < 0.7 * radius) {
        interior += recon.values(x, y);
        ++ni;
      } else if (r > 1.3 * radius && r < 0.45 * L) {
        exterior += recon.values(x, y);
        ++ne;
      }
    }
  }
  interior /= ni;
  exterior /= ne;
  CHECK(interior == doctest::Approx(mu).epsilon(0.05));
  CHECK(std::abs(exterior) < 0.05 * mu);
}

TEST_CASE("fbp: linear in the sinogram") {
  auto g = GridGeometry::uniform(24, 16, 1);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  ArrayXXd p(24, 16), q(24, 16);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    p(i) = uniform(rng);
    q(i) = uniform(rng);
  }
  const auto left = fbp_reconstruct(ArrayXXd(2.0 * p - 3.0 * q), g).values;
  const auto right = 2.0 * fbp_reconstruct(p, g).values -
                     3.0 * fbp_reconstruct(q, g).values;
  const double scale = right.abs().maxCoeff();
  CHECK(((left - right).abs().maxCoeff() / scale) < 1e-10);

  // constant shift stays a well-defined field: finite everywhere
  const auto shifted = fbp_reconstruct(ArrayXXd(p + 1.5), g).values;
  CHECK(shifted.isFinite().all());
}

TEST_CASE("fbp: hamming filter tempers the ram-lak response") {
  auto g = GridGeometry::uniform(32, 30, 1);
  ArrayXXd impulse = ArrayXXd::Zero(32, 30);
  impulse.row(16).setConstant(1.0);
  const auto sharp = fbp_reconstruct(impulse, g, FbpFilter::ram_lak);
  const auto smooth = fbp_reconstruct(impulse, g, FbpFilter::hamming);
  CHECK(nrss(smooth) < nrss(sharp));
}

TEST_CASE("kaczmarz: one update lands on the hyperplane") {
  Eigen::MatrixXd A(1, 3);
  A << 1.0, 2.0, -1.0;
  auto W = dense_to_sparse(A);
  VectorXd p(1);
  p << 4.0;
  VectorXd f = VectorXd::Zero(3);
  const VectorXd norms = row_squared_norms(W);
  kaczmarz_sweep_rows(W, p, nullptr, 1.0, norms, f);
  CHECK(A.row(0).dot(f) == doctest::Approx(4.0).epsilon(1e-14));

  // an exactly-zero residual leaves the iterate untouched bit for bit
  VectorXd p_exact(1);
  p_exact << A.row(0).dot(f);
  const VectorXd before = f;
  kaczmarz_sweep_rows(W, p_exact, nullptr, 1.0, norms, f);
  CHECK((f - before).norm() == 0.0);
}

TEST_CASE("kaczmarz: update magnitude is linear in alpha") {
  Eigen::MatrixXd A(1, 4);
  A << 0.5, -1.0, 2.0, 1.0;
  auto W = dense_to_sparse(A);
  VectorXd p(1);
  p << 3.0;
  const VectorXd norms = row_squared_norms(W);
  VectorXd f1 = VectorXd::Zero(4), f2 = VectorXd::Zero(4);
  kaczmarz_sweep_rows(W, p, nullptr, 1e-3, norms, f1);
  kaczmarz_sweep_rows(W, p, nullptr, 2e-3, norms, f2);
  CHECK(f2.norm() == doctest::Approx(2.0 * f1.norm()).epsilon(1e-12));
}

TEST_CASE("kaczmarz: consistent 3x3 system converges") {
  Eigen::MatrixXd A(3, 3);
  A << 4.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 5.0;
  const VectorXd truth = (VectorXd(3) << 1.0, -2.0, 0.5).finished();
  const VectorXd p = A * truth;  // direct solve oracle: the system is exact
  auto W = dense_to_sparse(A);
  const VectorXd norms = row_squared_norms(W);
  VectorXd f = VectorXd::Zero(3);
  for (int sweep = 0; sweep < 50; ++sweep) {
    kaczmarz_sweep_rows(W, p, nullptr, 1.0, norms, f);
  }
  CHECK((A * f - p).norm() < 1e-8);
  CHECK((f - truth).norm() < 1e-7);
}

TEST_CASE("kaczmarz: rows with zero norm and invalid rays are skipped") {
  Eigen::MatrixXd A(3, 2);
  A << 1.0, 0.0, 0.0, 0.0, 0.0, 1.0;  // middle row is empty
  auto W = dense_to_sparse(A);
  VectorXd p(3);
  p << 2.0, 99.0, -1.0;
  const VectorXd norms = row_squared_norms(W);
  VectorXd f = VectorXd::Zero(2);
  bool valid[3] = {true, true, false};
  kaczmarz_sweep_rows(W, p, valid, 1.0, norms, f);
  CHECK(f[0] == doctest::Approx(2.0));
  CHECK(f[1] == 0.0);  // its only ray was masked out
}

TEST_CASE("tv_gradient: constants and translation invariance") {
  auto g = GridGeometry::uniform(12, 4, 1);
  SliceImage flat(g);
  flat.values.setConstant(3.7);
  CHECK(tv_gradient(flat, 1e-8).values.abs().maxCoeff() == 0.0);

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  SliceImage f(g);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values(i) = uniform(rng);
  SliceImage shifted(g);
  shifted.values = f.values + 11.0;
  const auto gf = tv_gradient(f, 1e-8).values;
  const auto gs = tv_gradient(shifted, 1e-8).values;
  CHECK((gf - gs).abs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(tv_gradient(f, 0.0), std::invalid_argument);
}

TEST_CASE("tv_gradient: matches finite differences of the smoothed functional") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> uniform(0.0, 2.0);
  auto g = GridGeometry::uniform(16, 4, 1);
  for (int trial = 0; trial < 5; ++trial) {
    SliceImage f(g);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) {
      f.values(i) = uniform(rng);
    }
    const auto grad = tv_gradient(f, 1e-8, TvGradVariant::symmetric).values;
    const auto fd = oracles::smoothed_tv_fd_gradient(f.values, 1e-8);
    CHECK((grad - fd).abs().maxCoeff() < 1e-4);
  }
}

TEST_CASE("tv_gradient: as-printed variant differs and fails the oracle") {
  std::mt19937_64 rng(321);
  std::uniform_real_distribution<double> uniform(0.0, 2.0);
  auto g = GridGeometry::uniform(16, 4, 1);
  SliceImage f(g);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values(i) = uniform(rng);
  const auto printed = tv_gradient(f, 1e-8, TvGradVariant::as_printed).values;
  const auto fd = oracles::smoothed_tv_fd_gradient(f.values, 1e-8);
  CHECK((printed - fd).abs().maxCoeff() > 1e-2);
}

TEST_CASE("tv_gradient: direction is scale-stable well above epsilon") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto g = GridGeometry::uniform(16, 4, 1);
  SliceImage f(g);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values(i) = uniform(rng);
  SliceImage big(g);
  big.values = 10.0 * f.values;
  const auto g1 = tv_gradient(f, 1e-8).as_vector();
  const auto g2 = tv_gradient(big, 1e-8).as_vector();
  const double cosine = g1.dot(g2) / (g1.norm() * g2.norm());
  CHECK(cosine > 0.999);
}

TEST_CASE("bb_step: quadratic toy, identity and guard cases") {
  // On a quadratic 0.5 f^T A f the gradient difference is y = A s.
  Eigen::Matrix2d A;
  A << 2.0, 0.3, 0.3, 1.0;
  Eigen::Vector2d s(0.4, -0.2);
  const Eigen::Vector2d y = A * s;
  CHECK(bb1_step(s.squaredNorm(), s.dot(y), 1.0) ==
        doctest::Approx(s.squaredNorm() / s.dot(y)).epsilon(1e-15));

  CHECK(bb1_step(0.25, 0.25, 1.0) == doctest::Approx(1.0));  // s == y
  CHECK(bb1_step(0.25, 0.0, 0.5) == doctest::Approx(0.25));  // fallback: half
  CHECK(bb1_step(0.25, -1.0, 1e-8) == doctest::Approx(1e-8));  // floor

  auto g = GridGeometry::uniform(4, 2, 1);
  TVState state;
  state.current = SliceImage(g);
  state.previous = SliceImage(g);
  state.current_gradient = SliceImage(g);
  state.previous_gradient = SliceImage(g);
  state.current.values.setConstant(1.0);
  state.current_gradient.values.setConstant(1.0);  // s == y
  state.step = 0.7;
  CHECK(bb_step(state) == doctest::Approx(1.0));
  CHECK(state.step == doctest::Approx(1.0));
}

TEST_CASE("ossirt: one subset equals plain SIRT") {
  auto g = GridGeometry::uniform(16, 12, 1);
  auto W = build_system_matrix(g);
  SliceImage truth = disk_image(g, 5.0, 1.0);
  const VectorXd p = forward_project(W, truth);

  ReconConfig config;
  config.ossirt_subsets = 1;
  config.max_outer_iterations = 15;
  const SliceImage ours = ossirt_reconstruct(W, p, nullptr, config);
  const VectorXd oracle =
      oracles::dense_sirt(Eigen::MatrixXd(W.weights), p, 15);
  CHECK((ours.as_vector() - oracle).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("ossirt: error decreases monotonically on consistent data") {
  auto g = GridGeometry::uniform(32, 20, 1);
  auto W = build_system_matrix(g);
  SliceImage truth = disk_image(g, 10.0, 1.0);
  const VectorXd p = forward_project(W, truth);

  ReconConfig config;
  config.ossirt_subsets = 5;
  double prev_error = truth.as_vector().norm();  // error of the zero start
  for (int iters = 1; iters <= 20; ++iters) {
    config.max_outer_iterations = iters;
    const SliceImage recon = ossirt_reconstruct(W, p, nullptr, config);
    const double error = (recon.as_vector() - truth.as_vector()).norm();
    CHECK(error < prev_error + 1e-12);
    prev_error = error;
  }
}

TEST_CASE("ossirt: zero data keeps a zero image, empty subsets are counted") {
  auto g = GridGeometry::uniform(16, 10, 1);
  auto W = build_system_matrix(g);
  ReconConfig config;
  config.ossirt_subsets = 10;
  config.max_outer_iterations = 4;
  const VectorXd p = VectorXd::Zero(g.ray_count());
  CHECK(ossirt_reconstruct(W, p, nullptr, config).as_vector().norm() == 0.0);

  BoolGrid valid = BoolGrid::Constant(16, 10, true);
  valid.col(0).setConstant(false);  // subset 0 owns only angle 0
  int skipped = 0;
  ossirt_reconstruct(W, p, &valid, config, nullptr, &skipped);
  CHECK(skipped == 4);  // once per pass
}

TEST_CASE("tvart: lambda1 = 0 reduces to pure kaczmarz rounds") {
  auto g = GridGeometry::uniform(16, 12, 1);
  auto W = build_system_matrix(g);
  SliceImage truth = disk_image(g, 5.0, 0.9);
  const VectorXd p = forward_project(W, truth);

  ReconConfig config;
  config.lambda1 = 0.0;
  config.max_outer_iterations = 8;
  const SliceImage ours = tvart_reconstruct(W, p, nullptr, config);

  // regression comparator: init sweep + rounds of (sweep, clamp)
  const VectorXd norms = row_squared_norms(W.weights);
  VectorXd f = VectorXd::Zero(g.pixel_count());
  kaczmarz_sweep_rows(W.weights, p, nullptr, 1.0, norms, f);
  for (int round = 0; round < 8; ++round) {
    kaczmarz_sweep_rows(W.weights, p, nullptr, 1.0, norms, f);
    f = f.cwiseMax(0.0);
  }
  CHECK((ours.as_vector() - f).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("tvart: consistent constant start is a fixed point") {
  auto g = GridGeometry::uniform(12, 10, 1);
  auto W = build_system_matrix(g);
  SliceImage constant(g);
  constant.values.setConstant(0.6);
  const VectorXd p = forward_project(W, constant);

  ReconConfig config;
  config.lambda1 = 0.5;
  const VectorXd norms = row_squared_norms(W.weights);
  SliceSolveState state(g.pixel_count());
  state.f = constant.as_vector();
  for (int round = 0; round < 5; ++round) {
    slice_solve_round(W, p, nullptr, norms, config, state);
    state.f = state.f.cwiseMax(0.0);
  }
  CHECK((state.f - constant.as_vector()).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("tvart: beats fbp on streaky few-angle disk data") {
  const int L = 48;
  auto g = GridGeometry::uniform(L, 30, 1);
  auto W = build_system_matrix(g);
  const SliceImage truth = disk_image(g, 15.0, 1.0);
  const ArrayXXd sino = analytic_disk_sinogram(g, 15.0, 1.0);
  const VectorXd p = Eigen::Map<const VectorXd>(sino.data(), sino.size());

  ReconConfig config;
  config.lambda1 = 0.5;
  config.max_outer_iterations = 20;
  const SliceImage tvart = tvart_reconstruct(W, p, nullptr, config);
  const SliceImage fbp = fbp_reconstruct(sino, g);
  CHECK(ssim_global(tvart, truth) > ssim_global(fbp, truth));
}
