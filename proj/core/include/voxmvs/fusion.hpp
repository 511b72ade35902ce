#pragma once

#include <utility>
#include <vector>

#include "voxmvs/geometry.hpp"
#include "voxmvs/view_selection.hpp"
#include "voxmvs/volumes.hpp"

namespace voxmvs {

/// Per-voxel weighted average of the per-pair predictions.
ProbabilityVolume fuse(
    const std::vector<std::pair<ViewPairScore, ProbabilityVolume>>& predictions);

/// Same, with raw non-negative weights.
ProbabilityVolume fuse_weighted(const std::vector<double>& weights,
                                const std::vector<const ProbabilityVolume*>& volumes);

/// Strict thresholding: occupied iff p_x > tau.
OccupancyGrid threshold_binarize(const ProbabilityVolume& volume, double tau);

/// Ray-pooling thinning: per view, voxels are grouped by rounded projected
/// pixel and only the group's probability argmax keeps that view's vote
/// (ties: smallest linear index). A voxel survives iff it is occupied, has
/// p_x > tau, and wins in every view with a valid projection of its center.
OccupancyGrid ray_pool_multi(const ProbabilityVolume& volume,
                             const OccupancyGrid& occupancy,
                             const std::vector<const CameraView*>& views,
                             double tau);

OccupancyGrid ray_pool(const ProbabilityVolume& volume, const OccupancyGrid& occupancy,
                       const CameraView& view_i, const CameraView& view_j, double tau);

}  // namespace voxmvs
