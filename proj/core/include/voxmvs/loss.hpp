#pragma once

#include <vector>

#include "voxmvs/volumes.hpp"

namespace voxmvs {

/// Fraction of occupied ground-truth voxels over all listed volumes.
double occupancy_ratio(const std::vector<GroundTruthVolume>& gt);

/// Mean fraction of non-surface voxels (the complement statistic).
double non_surface_ratio(const std::vector<GroundTruthVolume>& gt);

/// Class-balanced cross-entropy:
///   -sum_x [ beta s_x log p_x + (1 - beta)(1 - s_x) log(1 - p_x) ].
double balanced_cross_entropy(const ProbabilityVolume& pred,
                              const GroundTruthVolume& gt, double beta);

/// Summed per-voxel squared error against the binary ground truth.
double refine_mse(const ProbabilityVolume& pred, const GroundTruthVolume& gt);

double total_loss(double l_init, double l_refine);

}  // namespace voxmvs
