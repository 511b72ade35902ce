#include "voxmvs/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace voxmvs {

NearestNeighborGrid::NearestNeighborGrid(const std::vector<Vec3>& points)
    : points_(points) {
  if (points_.empty()) return;
  Vec3 lo = points_.front(), hi = points_.front();
  for (const Vec3& p : points_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double extent = (hi - lo).maxCoeff();
  const double per_axis = std::cbrt(static_cast<double>(points_.size()));
  cell_size_ = extent > 0.0 ? extent / std::max(1.0, per_axis) : 1.0;
  for (int i = 0; i < static_cast<int>(points_.size()); ++i) {
    cells_[key_of(points_[i])].push_back(i);
  }
}

NearestNeighborGrid::CellKey NearestNeighborGrid::key_of(const Vec3& p) const {
  return {static_cast<int64_t>(std::floor(p.x() / cell_size_)),
          static_cast<int64_t>(std::floor(p.y() / cell_size_)),
          static_cast<int64_t>(std::floor(p.z() / cell_size_))};
}

double NearestNeighborGrid::nearest_distance(const Vec3& query) const {
  if (points_.empty()) {
    throw std::runtime_error("empty-cloud");
  }
  const CellKey center = key_of(query);
  double best = std::numeric_limits<double>::infinity();
  // Expand rings until a hit is found and the ring distance exceeds it.
  for (int ring = 0;; ++ring) {
    if (std::isfinite(best) && (ring - 1) * cell_size_ > best) {
      break;
    }
    bool any_cell = ring <= 1;
    for (int dz = -ring; dz <= ring; ++dz) {
      for (int dy = -ring; dy <= ring; ++dy) {
        for (int dx = -ring; dx <= ring; ++dx) {
          if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring) continue;
          auto it = cells_.find({center.x + dx, center.y + dy, center.z + dz});
          if (it == cells_.end()) continue;
          any_cell = true;
          for (int idx : it->second) {
            best = std::min(best, (points_[idx] - query).norm());
          }
        }
      }
    }
    if (!std::isfinite(best) && !any_cell && ring * cell_size_ > 1e18) {
      break;  // unreachable for finite data
    }
  }
  return best;
}

namespace {

std::pair<double, double> mean_median_nn(const std::vector<Vec3>& from,
                                         const std::vector<Vec3>& to) {
  if (from.empty() || to.empty()) {
    throw std::runtime_error("empty-cloud");
  }
  NearestNeighborGrid grid(to);
  std::vector<double> dists;
  dists.reserve(from.size());
  double sum = 0.0;
  for (const Vec3& p : from) {
    const double d = grid.nearest_distance(p);
    dists.push_back(d);
    sum += d;
  }
  std::sort(dists.begin(), dists.end());
  const std::size_t n = dists.size();
  const double median =
      n % 2 == 1 ? dists[n / 2] : 0.5 * (dists[n / 2 - 1] + dists[n / 2]);
  return {sum / n, median};
}

}  // namespace

std::pair<double, double> accuracy(const SurfacePointCloud& pred,
                                   const SurfacePointCloud& reference) {
  return mean_median_nn(pred.points, reference.points);
}

std::pair<double, double> completeness(const SurfacePointCloud& pred,
                                       const SurfacePointCloud& reference) {
  return mean_median_nn(reference.points, pred.points);
}

PercentageMetric f_score(const SurfacePointCloud& pred,
                         const SurfacePointCloud& reference, double dist_threshold) {
  if (!(dist_threshold > 0.0)) {
    throw std::runtime_error("invalid-threshold");
  }
  PercentageMetric m;
  if (pred.points.empty() || reference.points.empty()) {
    return m;  // empty side scores 0
  }
  {
    NearestNeighborGrid ref_grid(reference.points);
    std::size_t hits = 0;
    for (const Vec3& p : pred.points) {
      if (ref_grid.nearest_distance(p) <= dist_threshold) ++hits;
    }
    m.precision_pct = 100.0 * hits / pred.points.size();
  }
  {
    NearestNeighborGrid pred_grid(pred.points);
    std::size_t hits = 0;
    for (const Vec3& p : reference.points) {
      if (pred_grid.nearest_distance(p) <= dist_threshold) ++hits;
    }
    m.recall_pct = 100.0 * hits / reference.points.size();
  }
  if (m.precision_pct + m.recall_pct > 0.0) {
    m.f = 2.0 * m.precision_pct * m.recall_pct / (m.precision_pct + m.recall_pct);
  }
  return m;
}

EvalReport evaluate_clouds(const SurfacePointCloud& pred,
                           const SurfacePointCloud& reference,
                           double dist_threshold) {
  EvalReport report;
  report.dist_threshold = dist_threshold;
  const auto acc = accuracy(pred, reference);
  const auto comp = completeness(pred, reference);
  report.mean_accuracy = acc.first;
  report.median_accuracy = acc.second;
  report.mean_completeness = comp.first;
  report.median_completeness = comp.second;
  const auto pct = f_score(pred, reference, dist_threshold);
  report.precision_pct = pct.precision_pct;
  report.recall_pct = pct.recall_pct;
  report.f_score = pct.f;
  report.overall_distance = 0.5 * (report.mean_accuracy + report.mean_completeness);
  return report;
}

std::vector<int> sparsity_sample(const std::vector<int>& view_ids, int sparsity,
                                 int batchsize) {
  if (sparsity < 1 || batchsize < 1 || batchsize > sparsity) {
    throw std::runtime_error("invalid-sparsity");
  }
  std::vector<int> out;
  const int n = static_cast<int>(view_ids.size());
  for (int start = 0; start < n; start += sparsity) {
    for (int b = 0; b < batchsize && start + b < n; ++b) {
      out.push_back(view_ids[start + b]);
    }
  }
  return out;
}

double mean_baseline_angle(const SurfacePointCloud& reference,
                           const std::vector<CameraView>& views) {
  if (views.size() < 2 || reference.points.empty()) {
    throw std::runtime_error("insufficient-views");
  }
  const int n = static_cast<int>(views.size());
  std::vector<Vec3> centers(n);
  for (int i = 0; i < n; ++i) centers[i] = views[i].center();

  // Nearest other view per view, ties by list order.
  std::vector<int> nearest(n, -1);
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = (centers[i] - centers[j]).norm();
      if (d < best) {
        best = d;
        nearest[i] = j;
      }
    }
  }

  double sum = 0.0;
  std::size_t count = 0;
  for (const Vec3& x : reference.points) {
    for (int i = 0; i < n; ++i) {
      const Vec3 a = centers[i] - x;
      const Vec3 b = centers[nearest[i]] - x;
      if (a.norm() < 1e-12 || b.norm() < 1e-12) continue;
      sum += std::atan2(a.cross(b).norm(), a.dot(b));
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / count;
}

double speedup_ratio(const CubeCountLedger& ledger) {
  if (ledger.dense_baseline <= 0) {
    throw std::runtime_error("invalid-ledger");
  }
  const int64_t processed = ledger.total_processed();
  if (processed <= 0) return 0.0;
  return static_cast<double>(ledger.dense_baseline) / processed;
}

}  // namespace voxmvs
