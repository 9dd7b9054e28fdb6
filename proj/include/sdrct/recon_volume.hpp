#pragma once

#include <string>
#include <vector>

#include "sdrct/config.hpp"
#include "sdrct/fbp.hpp"
#include "sdrct/system_matrix.hpp"
#include "sdrct/types.hpp"

namespace sdrct {

enum class ReconMethod { fbp, ossirt, tvart, sdr };

ReconMethod recon_method_from_string(const std::string& s);
std::string to_string(ReconMethod m);

struct VolumeReconResult {
  Volume volume;
  std::vector<double> relative_change;  // per outer round; empty for FBP
  int iterations = 0;
  int warnings = 0;  // skipped OSSIRT subsets
  bool converged = false;
};

/// Reconstructs every slice of a stack with the chosen method, slices in
/// parallel where the method allows it. FBP ignores the matrix.
VolumeReconResult reconstruct_volume(const SinogramStack& sino,
                                     const SparseSystemMatrix& matrix,
                                     ReconMethod method,
                                     const ReconConfig& config,
                                     FbpFilter filter = FbpFilter::ram_lak,
                                     int threads = 0);

}  // namespace sdrct
