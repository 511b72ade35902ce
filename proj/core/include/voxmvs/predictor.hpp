#pragma once

#include <functional>
#include <map>
#include <string>

#include "voxmvs/geometry.hpp"
#include "voxmvs/volumes.hpp"

namespace voxmvs {

struct PredictorConfig {
  std::string name = "photo-consistency";
  int window_radius = 1;
  double sigma_color = 0.2;
  // Image blur per scale level, pixels; when a level is missing the pipeline
  // falls back to r^(k) / r^(K).
  std::map<int, double> blur_sigma_per_level;
};

/// Separable Gaussian blur, kernel truncated at 3*sigma, clamped edges.
/// sigma = 0 is the identity.
Image gaussian_blur(const Image& image, double sigma);

/// Default photo-consistency predictor: per voxel, the mean squared RGB
/// difference between the two CVCs over a (2w+1)^3 neighborhood is mapped
/// through exp(-d^2 / (2 sigma_color^2)). Voxels invalid in either view get
/// the probability floor.
ProbabilityVolume predict_photo_consistency(const ColoredVoxelCube& cvc_i,
                                            const ColoredVoxelCube& cvc_j,
                                            const PredictorConfig& config);

using PredictorFunction = std::function<ProbabilityVolume(
    const ColoredVoxelCube&, const ColoredVoxelCube&, const PredictorConfig&)>;

void register_predictor(const std::string& name, PredictorFunction fn);
PredictorFunction predictor_by_name(const std::string& name);

}  // namespace voxmvs
