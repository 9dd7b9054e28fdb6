#include "sdrct/fusion.hpp"

#include <stdexcept>

namespace sdrct {

SliceImage fuse_slices(const SliceImage& own, const SliceImage* lower,
                       const SliceImage* lower_diff, const SliceImage* upper,
                       const SliceImage* upper_diff, FusionSigns signs) {
  if ((lower == nullptr) != (lower_diff == nullptr) ||
      (upper == nullptr) != (upper_diff == nullptr)) {
    throw std::invalid_argument(
        "fuse_slices: neighbor estimate and difference must come together");
  }
  if (!lower && !upper) {
    throw std::invalid_argument("fuse_slices: no neighbor to fuse with");
  }

  SliceImage fused(own.geometry);
  fused.values = own.values;
  int terms = 1;
  if (signs == FusionSigns::consistent) {
    if (lower) {
      fused.values += lower->values + lower_diff->values;
      ++terms;
    }
    if (upper) {
      fused.values += upper->values - upper_diff->values;
      ++terms;
    }
  } else {
    // Printed variant: + f^{l,l+1} - f^{l-1,l} with the slice estimates.
    if (lower) {
      fused.values += lower->values - lower_diff->values;
      ++terms;
    }
    if (upper) {
      fused.values += upper->values + upper_diff->values;
      ++terms;
    }
  }
  fused.values /= double(terms);
  return fused;
}

SliceImage fuse_slices(const std::vector<SliceImage>& estimates,
                       const std::vector<SliceImage>& diffs, int l,
                       FusionSigns signs) {
  const int count = int(estimates.size());
  if (l < 0 || l >= count) {
    throw std::invalid_argument("fuse_slices: slice index out of range");
  }
  if (int(diffs.size()) + 1 != count) {
    throw std::invalid_argument("fuse_slices: need one difference per adjacent pair");
  }
  const bool has_lower = l > 0;
  const bool has_upper = l + 1 < count;
  return fuse_slices(estimates[l],
                     has_lower ? &estimates[l - 1] : nullptr,
                     has_lower ? &diffs[l - 1] : nullptr,
                     has_upper ? &estimates[l + 1] : nullptr,
                     has_upper ? &diffs[l] : nullptr, signs);
}

}  // namespace sdrct
