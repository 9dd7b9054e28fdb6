#pragma once

#include <cstdint>
#include <string>

namespace sdrct {

/// Third-numerator convention of the smoothed TV gradient. `symmetric` uses
/// the y-direction forward difference and is the exact gradient of the
/// smoothed TV functional; `as_printed` repeats the x-difference.
enum class TvGradVariant { symmetric, as_printed };

/// Sign convention of the slice-fusion average. `consistent` makes every
/// averaged term an unbiased estimate of the current slice.
enum class FusionSigns { consistent, as_printed };

/// Denominator of the lasso coordinate update: all rays of a slice, or only
/// the rays left valid by the blank-edge mask.
enum class LassoNormalization { all_rays, valid_rays };

/// All tunables of the iterative reconstructors. Immutable once a run starts.
struct ReconConfig {
  double lambda1 = 0.0;  // within-slice TV weight
  double lambda2 = 0.0;  // between-slice L1 weight
  double alpha = 1.0;    // Kaczmarz relaxation, in (0, 2]
  double tv_epsilon = 1e-8;
  int max_outer_iterations = 20;
  double convergence_threshold = 1e-3;  // relative L2 change
  double lasso_tolerance = 1e-6;        // max coordinate change per sweep
  int lasso_max_sweeps = 1000;
  int ossirt_subsets = 10;
  std::uint64_t rng_seed = 0;

  TvGradVariant tv_grad_variant = TvGradVariant::symmetric;
  FusionSigns fusion_signs = FusionSigns::consistent;
  LassoNormalization lasso_normalization = LassoNormalization::all_rays;
  bool fusion_enabled = true;

  void validate() const;
};

std::string to_string(TvGradVariant v);
std::string to_string(FusionSigns v);
TvGradVariant tv_grad_variant_from_string(const std::string& s);
FusionSigns fusion_signs_from_string(const std::string& s);

}  // namespace sdrct
