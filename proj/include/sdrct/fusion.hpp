#pragma once

#include <vector>

#include "sdrct/config.hpp"
#include "sdrct/types.hpp"

namespace sdrct {

/// Averages the available estimates of slice l: its own estimate, the lower
/// neighbor pushed up through the (l-1, l) difference, and the upper neighbor
/// pulled down through the (l, l+1) difference. Boundary slices average the
/// two available terms. Null neighbors are treated as out of range.
SliceImage fuse_slices(const SliceImage& own, const SliceImage* lower,
                       const SliceImage* lower_diff, const SliceImage* upper,
                       const SliceImage* upper_diff,
                       FusionSigns signs = FusionSigns::consistent);

/// Convenience form over full estimate/difference stacks; diffs[k] estimates
/// f^{k+1} - f^k.
SliceImage fuse_slices(const std::vector<SliceImage>& estimates,
                       const std::vector<SliceImage>& diffs, int l,
                       FusionSigns signs = FusionSigns::consistent);

}  // namespace sdrct
