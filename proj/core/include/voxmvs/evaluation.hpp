#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "voxmvs/geometry.hpp"
#include "voxmvs/multiscale.hpp"

namespace voxmvs {

struct EvalReport {
  double mean_accuracy = 0.0;
  double median_accuracy = 0.0;
  double mean_completeness = 0.0;
  double median_completeness = 0.0;
  double precision_pct = 0.0;
  double recall_pct = 0.0;
  double f_score = 0.0;
  double overall_distance = 0.0;
  double dist_threshold = 0.0;
};

/// Exact nearest-neighbor queries over a fixed point set via a uniform grid.
class NearestNeighborGrid {
 public:
  explicit NearestNeighborGrid(const std::vector<Vec3>& points);
  double nearest_distance(const Vec3& query) const;
  bool empty() const { return points_.empty(); }

 private:
  struct CellKey {
    int64_t x, y, z;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& k) const {
      std::size_t h = std::hash<int64_t>()(k.x);
      h = h * 1000003 ^ std::hash<int64_t>()(k.y);
      h = h * 1000003 ^ std::hash<int64_t>()(k.z);
      return h;
    }
  };
  CellKey key_of(const Vec3& p) const;

  std::vector<Vec3> points_;
  double cell_size_ = 1.0;
  std::unordered_map<CellKey, std::vector<int>, CellHash> cells_;
};

/// Mean/median nearest-neighbor distance from pred to reference.
std::pair<double, double> accuracy(const SurfacePointCloud& pred,
                                   const SurfacePointCloud& reference);

/// Mean/median nearest-neighbor distance from reference to pred.
std::pair<double, double> completeness(const SurfacePointCloud& pred,
                                       const SurfacePointCloud& reference);

struct PercentageMetric {
  double precision_pct = 0.0;
  double recall_pct = 0.0;
  double f = 0.0;
};

PercentageMetric f_score(const SurfacePointCloud& pred,
                         const SurfacePointCloud& reference, double dist_threshold);

EvalReport evaluate_clouds(const SurfacePointCloud& pred,
                           const SurfacePointCloud& reference,
                           double dist_threshold);

/// Every n-th position of the id list expanded to a consecutive batch of b.
std::vector<int> sparsity_sample(const std::vector<int>& view_ids, int sparsity,
                                 int batchsize);

/// Mean over (ground-truth point, view) of the angle at the point subtended by
/// the view and its nearest other view.
double mean_baseline_angle(const SurfacePointCloud& reference,
                           const std::vector<CameraView>& views);

struct CubeCountLedger {
  struct LevelCount {
    int level = 0;
    int64_t cells_scheduled = 0;
    int64_t cells_processed = 0;
  };
  std::vector<LevelCount> levels;
  int64_t dense_baseline = 0;  // single-scale sweep at r^(K)
  double relative_resolution = 0.0;

  void record(int level, int64_t scheduled, int64_t processed) {
    levels.push_back({level, scheduled, processed});
  }
  int64_t total_processed() const {
    int64_t sum = 0;
    for (const auto& l : levels) sum += l.cells_processed;
    return sum;
  }
};

double speedup_ratio(const CubeCountLedger& ledger);

}  // namespace voxmvs
