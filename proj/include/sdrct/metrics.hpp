#pragma once

#include <limits>
#include <string>
#include <vector>

#include "sdrct/types.hpp"

namespace sdrct {

/// Disjoint, nonempty target and background masks over one slice.
struct RoiSpec {
  BoolGrid target;
  BoolGrid background;
  void validate() const;
};

/// 10 log10( sum (f - mean_f)^2 / sum (fhat - f)^2 ). Perfect reconstruction
/// returns +infinity.
double snr_db(const SliceImage& estimate, const SliceImage& truth);

/// Single-window global SSIM over the whole slice.
double ssim_global(const SliceImage& estimate, const SliceImage& truth,
                   double c1, double c2);

/// Defaults c1 = (0.01 R)^2, c2 = (0.03 R)^2 with R the truth value range.
double ssim_global(const SliceImage& estimate, const SliceImage& truth);

/// |mean_target - mean_background| / sqrt(var_target + var_background).
/// Equal means give 0; distinct means over two constant regions give
/// +infinity.
double cnr(const SliceImage& image, const RoiSpec& roi);

/// No-reference structural sharpness: sum of squared forward differences,
/// boundary row/column excluded from the out-of-range term.
double nrss(const SliceImage& image);

/// ||current - previous||_2 / ||previous||_2 over all voxels.
double relative_change(const Volume& current, const Volume& previous);

struct MetricReport {
  std::string method;
  std::string scenario;
  std::vector<int> slice_indices;  // slices behind the per-slice vectors
  std::vector<double> slice_snr_db, slice_ssim, slice_nrss;
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  double ssim = std::numeric_limits<double>::quiet_NaN();
  double cnr = std::numeric_limits<double>::quiet_NaN();
  double nrss = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double wall_seconds = 0.0;
  std::string config_json;
};

/// CSV with columns method,scenario,snr_db,ssim,cnr,nrss,iterations,seconds
/// and fixed 6-significant-digit formatting, rows in input order.
std::string report_table(const std::vector<MetricReport>& runs);

/// Middle-slice ROI of the Shepp-Logan phantom: targets are the three small
/// ellipsoids near the bottom of the skull, background the interior gray
/// region outside every inner ellipsoid.
RoiSpec shepp_logan_roi(const GridGeometry& geometry, int slice = -1);

/// Per-slice SNR/SSIM over the middle `band` slices (band clamped to the
/// stack), NRSS over the same band, CNR at the middle slice when a ROI is
/// given. Pass truth = nullptr for the no-reference mode.
MetricReport evaluate_volume(const Volume& recon, const Volume* truth,
                             const RoiSpec* roi, const std::string& method,
                             const std::string& scenario, int band = 20);

}  // namespace sdrct
