#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "voxmvs/geometry.hpp"
#include "voxmvs/multiscale.hpp"

namespace voxmvs {

/// Photometric descriptor of the image patch around the projected sub-volume
/// center: mean RGB, per-channel std, 8-bin gray histogram, mean gradient
/// magnitude; L2-normalized.
struct PatchDescriptor {
  int view_id = -1;
  std::array<double, 15> values{};
  bool valid = false;
};

struct ViewPairScore {
  int view_i = -1;
  int view_j = -1;
  double theta = 0.0;       // baseline angle, radians
  int barrier_i = 0;        // |B(C, v_i)|
  int barrier_j = 0;        // |B(C, v_j)|
  double p_occ = 1.0;       // probability of not being occluded
  double photometric = 0.0; // scorer output
  double weight = 0.0;      // p_occ * photometric
};

using RelativeWeightFunction = std::function<double(
    double theta, const PatchDescriptor& e_i, const PatchDescriptor& e_j)>;

/// Coarse-surface points inside the view hull H(C, v) and strictly outside C.
std::vector<Vec3> barrier_points(const SurfacePointCloud& prev_surface,
                                 const SubVolume& subvolume,
                                 const CameraView& camera);

/// exp(-alpha * r_k^2 * (count_i + count_j)), in (0, 1].
double occlusion_probability(int count_i, int count_j, double alpha, double r_k);

PatchDescriptor patch_descriptor(const CameraView& camera,
                                 const SubVolume& subvolume, int patch_side);

/// Scorer output for a pair; the default scorer combines descriptor cosine
/// similarity with a Gaussian baseline-angle preference.
double photometric_score(double theta, const PatchDescriptor& e_i,
                         const PatchDescriptor& e_j,
                         const RelativeWeightFunction& scorer);

RelativeWeightFunction make_angle_scorer(double theta0_deg, double sigma_deg);
double default_scorer(double theta, const PatchDescriptor& e_i,
                      const PatchDescriptor& e_j);

void register_scorer(const std::string& name, RelativeWeightFunction fn);
RelativeWeightFunction scorer_by_name(const std::string& name);

inline constexpr int kDefaultPatchSide = 64;
inline constexpr double kDefaultScorerThetaPeakDeg = 15.0;
inline constexpr double kDefaultScorerThetaSigmaDeg = 15.0;

/// Scores all unordered view pairs for one sub-volume and returns the top
/// n_v by weight (ties broken by ascending (i, j)). With no coarse surface
/// (level 1) the occlusion term is disabled: p_occ = 1 for every pair.
std::vector<ViewPairScore> rank_view_pairs(const std::vector<CameraView>& views,
                                           const SubVolume& subvolume,
                                           const SurfacePointCloud* prev_surface,
                                           double alpha, int n_v,
                                           const RelativeWeightFunction& scorer,
                                           int patch_side = kDefaultPatchSide);

}  // namespace voxmvs
