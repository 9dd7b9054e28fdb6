#include "sdrct/recon_volume.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "sdrct/kaczmarz.hpp"
#include "sdrct/ossirt.hpp"
#include "sdrct/parallel.hpp"
#include "sdrct/sdr.hpp"
#include "sdrct/tvart.hpp"

namespace sdrct {

ReconMethod recon_method_from_string(const std::string& s) {
  if (s == "fbp") return ReconMethod::fbp;
  if (s == "ossirt") return ReconMethod::ossirt;
  if (s == "tvart") return ReconMethod::tvart;
  if (s == "sdr") return ReconMethod::sdr;
  throw std::invalid_argument("unknown method '" + s +
                              "' (valid: fbp, ossirt, tvart, sdr)");
}

std::string to_string(ReconMethod m) {
  switch (m) {
    case ReconMethod::fbp: return "fbp";
    case ReconMethod::ossirt: return "ossirt";
    case ReconMethod::tvart: return "tvart";
    case ReconMethod::sdr: return "sdr";
  }
  return "?";
}

namespace {

std::vector<double> aggregate_traces(const std::vector<SliceTrace>& traces) {
  std::size_t rounds = 0;
  for (const auto& t : traces) rounds = std::max(rounds, t.delta_sq.size());
  std::vector<double> change(rounds, 0.0);
  for (std::size_t r = 0; r < rounds; ++r) {
    double delta_sq = 0.0, prev_sq = 0.0;
    for (const auto& t : traces) {
      if (r < t.delta_sq.size()) {
        delta_sq += t.delta_sq[r];
        prev_sq += t.prev_sq[r];
      }
    }
    change[r] = prev_sq > 0.0 ? std::sqrt(delta_sq / prev_sq)
                              : std::numeric_limits<double>::infinity();
  }
  return change;
}

}  // namespace

VolumeReconResult reconstruct_volume(const SinogramStack& sino,
                                     const SparseSystemMatrix& matrix,
                                     ReconMethod method,
                                     const ReconConfig& config,
                                     FbpFilter filter, int threads) {
  sino.validate();
  const auto& g = sino.geometry;
  const int S = g.slice_count;
  const int workers = resolve_threads(threads);

  VolumeReconResult result;
  result.volume = Volume(g);

  if (method == ReconMethod::sdr) {
    SdrResult sdr = sdr_reconstruct(sino, matrix, config, workers);
    result.volume = std::move(sdr.volume);
    result.relative_change = std::move(sdr.relative_change);
    result.iterations = sdr.iterations;
    result.converged = sdr.converged;
    return result;
  }

  if (method == ReconMethod::fbp) {
    parallel_for(S, workers, [&](std::int64_t l) {
      result.volume.slices[l] = fbp_reconstruct(sino.data[l], g, filter);
    });
    return result;
  }

  if (!g.same_grid(matrix.geometry)) {
    throw std::invalid_argument("reconstruct_volume: geometry mismatch");
  }
  std::vector<SliceTrace> traces(S);
  std::atomic<int> warnings{0};
  parallel_for(S, workers, [&](std::int64_t l) {
    const VectorXd p =
        Eigen::Map<const VectorXd>(sino.data[l].data(), sino.data[l].size());
    if (method == ReconMethod::ossirt) {
      int skipped = 0;
      result.volume.slices[l] = ossirt_reconstruct(
          matrix, p, &sino.mask.valid[l], config, &traces[l], &skipped);
      warnings += skipped;
    } else {
      result.volume.slices[l] = tvart_reconstruct(
          matrix, p, &sino.mask.valid[l], config, &traces[l]);
    }
  });
  result.relative_change = aggregate_traces(traces);
  result.iterations = int(result.relative_change.size());
  result.warnings = warnings.load();
  return result;
}

}  // namespace sdrct
