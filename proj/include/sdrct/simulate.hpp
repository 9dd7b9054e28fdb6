#pragma once

#include "sdrct/types.hpp"

namespace sdrct {

/// Data-generation projector: integrates bilinear_sample along each detector
/// ray with midpoint-rule spacing `step` (in pixels). Deliberately distinct
/// from the system matrix so reconstructions are never tested against their
/// own forward model.
ArrayXd simulate_projection(const SliceImage& slice, double angle,
                            double step = 0.5, int detector_count = -1);

/// Clean log-domain sinogram of a volume at `angle_count` uniform angles,
/// with an all-valid mask. Parallel over slices.
SinogramStack simulate_sinogram(const Volume& volume, int angle_count,
                                double step = 0.5, int threads = 0);

}  // namespace sdrct
