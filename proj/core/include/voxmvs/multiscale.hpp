#pragma once

#include <utility>
#include <vector>

#include "voxmvs/geometry.hpp"
#include "voxmvs/volumes.hpp"

namespace voxmvs {

/// Geometric resolution schedule r^(k) = r1 / delta^(k-1), ending at the
/// first level whose resolution is <= the target.
struct ResolutionSchedule {
  std::vector<std::pair<int, double>> levels;  // (k, resolution)
  int common_ratio = 4;
  double target_resolution = 0.0;

  int finest_level() const { return levels.back().first; }
  double resolution_at(int k) const { return levels.at(k - 1).second; }
};

/// A regular lattice of same-level sub-volumes covering (part of) the scene.
struct Partition {
  int level = 1;
  std::vector<SubVolume> cells;
  double stride = 0.0;  // cell spacing, <= side length when overlapping
};

/// Level-k surface estimate: occupied world-space voxel centers.
struct SurfacePointCloud {
  int level = 1;
  std::vector<Vec3> points;
  double resolution = 0.0;
};

ResolutionSchedule make_schedule(double r1, int delta, double target);

/// Lattice of level-1 cells covering the bounding box. The last cell per axis
/// is clamped toward the box edge (snapped to the voxel lattice).
Partition initial_partition(const Box& bbox, int s, double r1, int overlap_voxels);

/// Level-k cells (same lattice as initial_partition at r^(k), anchored at the
/// bbox origin) that contain at least one point of the coarser surface.
/// Cells are sorted lexicographically by lattice index.
Partition refine_partition(const Box& bbox, const SurfacePointCloud& prev_surface,
                           const ResolutionSchedule& schedule, int k, int s,
                           int overlap_voxels);

/// Threshold p_x > tau and merge overlapping cells, keeping the maximum
/// probability per world-space voxel index before thresholding.
SurfacePointCloud surface_from_probability(
    const std::vector<std::pair<SubVolume, ProbabilityVolume>>& cells, double tau);

/// Cell start offsets along one axis: 0, stride, 2*stride, ... with the last
/// cell clamped (voxel-aligned) so the axis extent is fully covered.
std::vector<double> lattice_positions(double extent, double side, double stride,
                                      double resolution);

}  // namespace voxmvs
