#pragma once

#include <cstdint>
#include <vector>

#include "voxmvs/geometry.hpp"

namespace voxmvs {

inline constexpr double kProbFloor = 1e-6;
inline constexpr double kProbCeil = 1.0 - 1e-6;

/// Per-voxel on-surface confidence, clamped to (kProbFloor, kProbCeil).
struct ProbabilityVolume {
  SubVolume subvolume;
  std::vector<double> probs;  // s^3, indexed by SubVolume::linear_index

  static ProbabilityVolume filled(const SubVolume& sv, double p) {
    ProbabilityVolume v;
    v.subvolume = sv;
    v.probs.assign(sv.voxel_count(), p);
    return v;
  }
};

struct OccupancyGrid {
  SubVolume subvolume;
  std::vector<uint8_t> occupied;  // s^3

  static OccupancyGrid empty(const SubVolume& sv) {
    OccupancyGrid g;
    g.subvolume = sv;
    g.occupied.assign(sv.voxel_count(), 0);
    return g;
  }
};

/// Ground-truth occupancy for one sub-volume.
struct GroundTruthVolume {
  SubVolume subvolume;
  std::vector<uint8_t> occupancy;  // s^3
};

}  // namespace voxmvs
