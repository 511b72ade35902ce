#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "voxmvs/evaluation.hpp"
#include "voxmvs/geometry.hpp"
#include "voxmvs/multiscale.hpp"
#include "voxmvs/predictor.hpp"
#include "voxmvs/view_selection.hpp"

namespace voxmvs {

struct PipelineConfig {
  // resolution schedule
  double r1 = 0.2;
  int delta = 4;
  double target_resolution = 0.05;
  // sub-volume geometry
  int s = 16;
  int overlap_voxels = 2;
  // view selection
  double alpha = 1.0;
  int n_v = 3;
  std::string scorer = "default";
  int patch_side = kDefaultPatchSide;
  // binarization
  double tau = 0.7;
  double tau_intermediate = 0.7;
  bool ray_pool = true;
  std::string ray_pool_levels = "finest";  // "finest" or "all"
  // predictor
  PredictorConfig predictor;
  // execution
  uint64_t seed = 0;
  int threads = 1;
};

/// Per-cell view-pair selection at the finest level.
struct CellSelection {
  SubVolume cell;
  std::vector<ViewPairScore> pairs;
};

struct ReconstructionResult {
  SurfacePointCloud final_cloud;
  std::vector<SurfacePointCloud> per_level;  // S^(1) .. S^(K)
  CubeCountLedger ledger;
  std::vector<CellSelection> final_selections;
  bool empty_level_warning = false;
  bool degenerate_precision_warning = false;
};

ReconstructionResult reconstruct(const std::vector<CameraView>& views,
                                 const Box& bbox, const PipelineConfig& config);

}  // namespace voxmvs
