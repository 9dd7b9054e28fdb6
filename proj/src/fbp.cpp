#include "sdrct/fbp.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace sdrct {

std::string to_string(FbpFilter f) {
  return f == FbpFilter::ram_lak ? "ram-lak" : "hamming";
}

FbpFilter fbp_filter_from_string(const std::string& s) {
  if (s == "ram-lak" || s == "ramlak") return FbpFilter::ram_lak;
  if (s == "hamming") return FbpFilter::hamming;
  throw std::invalid_argument("unknown FBP filter: " + s);
}

SliceImage fbp_reconstruct(const ArrayXXd& sino_slice,
                           const GridGeometry& geometry, FbpFilter filter) {
  const int D = geometry.detector_count;
  const int A = geometry.angle_count;
  if (A < 2) {
    throw std::invalid_argument("fbp_reconstruct: need at least 2 angles");
  }
  if (sino_slice.rows() != D || sino_slice.cols() != A) {
    throw std::invalid_argument("fbp_reconstruct: sinogram shape mismatch");
  }
  const double tau = geometry.pixel_size;

  int N = 1;
  while (N < 2 * D) N *= 2;

  // Band-limited ramp kernel, stored wrapped for circular convolution.
  std::vector<std::complex<double>> kernel_time(N, 0.0);
  kernel_time[0] = 1.0 / (4.0 * tau * tau);
  for (int n = 1; n < D; ++n) {
    const double v =
        (n % 2 == 1) ? -1.0 / (M_PI * M_PI * n * n * tau * tau) : 0.0;
    kernel_time[n] = v;
    kernel_time[N - n] = v;
  }

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> kernel_freq(N);
  fft.fwd(kernel_freq, kernel_time);
  if (filter == FbpFilter::hamming) {
    for (int k = 0; k < N; ++k) {
      const int signed_k = k <= N / 2 ? k : k - N;
      const double w =
          0.54 + 0.46 * std::cos(M_PI * double(signed_k) / double(N / 2));
      kernel_freq[k] *= w;
    }
  }

  // Filter every angle: Q_theta = tau * (p conv kernel).
  ArrayXXd filtered(D, A);
  std::vector<std::complex<double>> buf(N), spec(N);
  for (int a = 0; a < A; ++a) {
    std::fill(buf.begin(), buf.end(), std::complex<double>(0.0));
    for (int d = 0; d < D; ++d) buf[d] = sino_slice(d, a);
    fft.fwd(spec, buf);
    for (int k = 0; k < N; ++k) spec[k] *= kernel_freq[k];
    fft.inv(buf, spec);
    for (int d = 0; d < D; ++d) filtered(d, a) = tau * buf[d].real();
  }

  // Pixel-driven backprojection with linear detector interpolation.
  const int L = geometry.side_length;
  SliceImage image(geometry);
  const double scale = M_PI / A;
  for (int a = 0; a < A; ++a) {
    const double theta = geometry.angles[a];
    const double nx = -std::sin(theta);
    const double ny = std::cos(theta);
    for (int y = 0; y < L; ++y) {
      const double py = (y - 0.5 * (L - 1)) * tau;
      for (int x = 0; x < L; ++x) {
        const double px = (x - 0.5 * (L - 1)) * tau;
        const double t = px * nx + py * ny;
        const double bin = t / tau + 0.5 * (D - 1);
        const int b0 = int(std::floor(bin));
        const double frac = bin - b0;
        double value = 0.0;
        if (b0 >= 0 && b0 < D) value += (1.0 - frac) * filtered(b0, a);
        if (b0 + 1 >= 0 && b0 + 1 < D) value += frac * filtered(b0 + 1, a);
        image.values(x, y) += scale * value;
      }
    }
  }
  return image;
}

}  // namespace sdrct
