#include "sdrct/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sdrct/phantom.hpp"

namespace sdrct {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void mask_stats(const ArrayXXd& values, const BoolGrid& mask, double& mean,
                double& variance) {
  double sum = 0.0;
  std::int64_t count = 0;
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    if (mask(i)) {
      sum += values(i);
      ++count;
    }
  }
  mean = sum / double(count);
  double sq = 0.0;
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    if (mask(i)) {
      const double d = values(i) - mean;
      sq += d * d;
    }
  }
  variance = sq / double(count);
}

std::string format_cell(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / double(v.size());
}

}  // namespace

void RoiSpec::validate() const {
  if (target.size() == 0 || background.size() == 0 ||
      target.rows() != background.rows() ||
      target.cols() != background.cols()) {
    throw std::invalid_argument("RoiSpec: mask shapes mismatch");
  }
  if (!target.any() || !background.any()) {
    throw std::invalid_argument("RoiSpec: masks must be nonempty");
  }
  if ((target && background).any()) {
    throw std::invalid_argument("RoiSpec: masks must be disjoint");
  }
}

double snr_db(const SliceImage& estimate, const SliceImage& truth) {
  if (estimate.values.rows() != truth.values.rows() ||
      estimate.values.cols() != truth.values.cols()) {
    throw std::invalid_argument("snr_db: shape mismatch");
  }
  const double mean = truth.values.mean();
  const double signal = (truth.values - mean).square().sum();
  if (signal == 0.0) {
    throw std::invalid_argument("snr_db: constant truth is undefined");
  }
  const double error = (estimate.values - truth.values).square().sum();
  if (error == 0.0) return kInf;
  return 10.0 * std::log10(signal / error);
}

double ssim_global(const SliceImage& estimate, const SliceImage& truth,
                   double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) {
    throw std::invalid_argument("ssim_global: c1 and c2 must be positive");
  }
  const auto& a = estimate.values;
  const auto& b = truth.values;
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("ssim_global: shape mismatch");
  }
  const double n = double(a.size());
  const double mu_a = a.mean();
  const double mu_b = b.mean();
  const double var_a = (a - mu_a).square().sum() / n;
  const double var_b = (b - mu_b).square().sum() / n;
  const double cov = ((a - mu_a) * (b - mu_b)).sum() / n;
  return (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2) /
         ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
}

double ssim_global(const SliceImage& estimate, const SliceImage& truth) {
  double range = truth.values.maxCoeff() - truth.values.minCoeff();
  if (range <= 0.0) range = 1.0;
  return ssim_global(estimate, truth, std::pow(0.01 * range, 2),
                     std::pow(0.03 * range, 2));
}

double cnr(const SliceImage& image, const RoiSpec& roi) {
  roi.validate();
  if (image.values.rows() != roi.target.rows() ||
      image.values.cols() != roi.target.cols()) {
    throw std::invalid_argument("cnr: ROI shape mismatch");
  }
  double mean_t, var_t, mean_b, var_b;
  mask_stats(image.values, roi.target, mean_t, var_t);
  mask_stats(image.values, roi.background, mean_b, var_b);
  if (mean_t == mean_b) return 0.0;
  const double var_sum = var_t + var_b;
  if (var_sum == 0.0) return kInf;
  return std::abs(mean_t - mean_b) / std::sqrt(var_sum);
}

double nrss(const SliceImage& image) {
  const auto& f = image.values;
  const int L = int(f.rows());
  double sum = 0.0;
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x + 1 < L; ++x) {
      const double d = f(x + 1, y) - f(x, y);
      sum += d * d;
    }
  }
  for (int y = 0; y + 1 < L; ++y) {
    for (int x = 0; x < L; ++x) {
      const double d = f(x, y) - f(x, y + 1);
      sum += d * d;
    }
  }
  return sum;
}

double relative_change(const Volume& current, const Volume& previous) {
  if (current.slices.size() != previous.slices.size()) {
    throw std::invalid_argument("relative_change: slice count mismatch");
  }
  double delta_sq = 0.0, prev_sq = 0.0;
  for (std::size_t l = 0; l < current.slices.size(); ++l) {
    delta_sq +=
        (current.slices[l].values - previous.slices[l].values).square().sum();
    prev_sq += previous.slices[l].values.square().sum();
  }
  if (delta_sq == 0.0) return 0.0;
  if (prev_sq == 0.0) return kInf;
  return std::sqrt(delta_sq / prev_sq);
}

std::string report_table(const std::vector<MetricReport>& runs) {
  if (runs.empty()) {
    throw std::invalid_argument("report_table: no runs to report");
  }
  std::string csv = "method,scenario,snr_db,ssim,cnr,nrss,iterations,seconds\n";
  for (const auto& r : runs) {
    csv += r.method + "," + r.scenario + "," + format_cell(r.snr_db) + "," +
           format_cell(r.ssim) + "," + format_cell(r.cnr) + "," +
           format_cell(r.nrss) + "," + std::to_string(r.iterations) + "," +
           format_cell(r.wall_seconds) + "\n";
  }
  return csv;
}

RoiSpec shepp_logan_roi(const GridGeometry& geometry, int slice) {
  const int L = geometry.side_length;
  if (slice < 0) slice = geometry.slice_count / 2;
  const auto& table = shepp_logan_ellipsoids();
  auto coord = [L](int i) { return (2.0 * i + 1.0) / L - 1.0; };
  const double z =
      (2.0 * slice + 1.0) / geometry.slice_count - 1.0;

  RoiSpec roi;
  roi.target = BoolGrid::Constant(L, L, false);
  roi.background = BoolGrid::Constant(L, L, false);
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      const double px = coord(x);
      const double py = coord(y);
      bool in[10];
      for (int e = 0; e < 10; ++e) in[e] = table[e].contains(px, py, z);
      // Targets: the three small ellipsoids near the bottom of the skull.
      roi.target(x, y) = in[7] || in[8] || in[9];
      // Background: interior gray matter away from every inner structure.
      bool inner = false;
      for (int e = 2; e < 10; ++e) inner = inner || in[e];
      roi.background(x, y) = in[1] && !inner;
    }
  }
  roi.validate();
  return roi;
}

MetricReport evaluate_volume(const Volume& recon, const Volume* truth,
                             const RoiSpec* roi, const std::string& method,
                             const std::string& scenario, int band) {
  MetricReport report;
  report.method = method;
  report.scenario = scenario;

  const int S = int(recon.slices.size());
  band = std::min(band, S);
  const int start = std::max(0, S / 2 - band / 2);
  const int stop = std::min(S, start + band);
  for (int l = start; l < stop; ++l) {
    report.slice_indices.push_back(l);
    report.slice_nrss.push_back(nrss(recon.slices[l]));
    if (truth) {
      report.slice_snr_db.push_back(snr_db(recon.slices[l], truth->slices[l]));
      report.slice_ssim.push_back(
          ssim_global(recon.slices[l], truth->slices[l]));
    }
  }
  report.nrss = mean_of(report.slice_nrss);
  if (truth) {
    report.snr_db = mean_of(report.slice_snr_db);
    report.ssim = mean_of(report.slice_ssim);
  }
  if (roi) report.cnr = cnr(recon.slices[S / 2], *roi);
  return report;
}

}  // namespace sdrct
