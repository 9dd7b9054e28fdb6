#pragma once

#include "sdrct/types.hpp"

namespace sdrct {

enum class FbpFilter { ram_lak, hamming };

std::string to_string(FbpFilter f);
FbpFilter fbp_filter_from_string(const std::string& s);

/// Filtered back projection of one slice's (detector, angle) sinogram:
/// frequency-domain ramp filtering per angle (zero-padded to the next power
/// of two >= 2*detector_count) followed by pixel-driven backprojection with
/// linear detector interpolation, scaled by pi/angle_count. Blank-edge bins
/// are plain zeros here; FBP has no mask mechanism.
SliceImage fbp_reconstruct(const ArrayXXd& sino_slice,
                           const GridGeometry& geometry,
                           FbpFilter filter = FbpFilter::ram_lak);

}  // namespace sdrct
