#pragma once

#include <cstdint>

#include "sdrct/types.hpp"

namespace sdrct {

/// Blank-edge emulation: per angle, an independent pair of top/bottom shifts
/// drawn from {0, ..., max_shift} invalidates detector-edge runs. All slices
/// at one angle share the same shifts.
struct BlankEdgeModel {
  int max_shift = 0;      // detector bins
  bool per_angle = true;  // false: one shift pair shared by every angle

  static BlankEdgeModel for_geometry(const GridGeometry& g);  // 5% of L
  void validate(const GridGeometry& g) const;
};

/// Adds i.i.d. N(0, sigma^2) to every valid entry, in the log projection
/// domain. Invalid entries stay untouched. Deterministic given the seed;
/// each (slice, angle) plane row uses its own derived sub-stream.
SinogramStack add_gaussian_noise(const SinogramStack& sino, double sigma,
                                 std::uint64_t seed);

/// Applies the blank-edge model; returns the stack with updated mask and
/// zeroed invalid values.
SinogramStack apply_blank_edges(const SinogramStack& sino,
                                const BlankEdgeModel& model,
                                std::uint64_t seed);

}  // namespace sdrct
