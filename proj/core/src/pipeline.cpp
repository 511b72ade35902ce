#include "voxmvs/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "voxmvs/fusion.hpp"

namespace voxmvs {

namespace {

int64_t dense_cell_count(const Box& bbox, int s, double resolution,
                         int overlap_voxels) {
  const double side = s * resolution;
  const double stride = (s - overlap_voxels) * resolution;
  int64_t count = 1;
  for (int a = 0; a < 3; ++a) {
    count *= static_cast<int64_t>(
        lattice_positions(bbox.size[a], side, stride, resolution).size());
  }
  return count;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int count = std::min<int>(threads, static_cast<int>(n));
  for (int t = 0; t < count; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

struct CellOutput {
  ProbabilityVolume fused;
  std::vector<ViewPairScore> pairs;
  std::vector<int> distinct_views;
  bool valid = false;
};

CellOutput process_cell(const SubVolume& cell, const std::vector<CameraView>& views,
                        const SurfacePointCloud* prev_surface,
                        const PipelineConfig& config,
                        const RelativeWeightFunction& scorer,
                        const PredictorFunction& predictor) {
  CellOutput out;
  out.pairs = rank_view_pairs(views, cell, prev_surface, config.alpha, config.n_v,
                              scorer, config.patch_side);
  if (out.pairs.empty()) return out;

  std::map<int, int> view_index;
  for (std::size_t i = 0; i < views.size(); ++i) view_index[views[i].id] = static_cast<int>(i);

  std::map<int, ColoredVoxelCube> cvcs;
  for (const ViewPairScore& pair : out.pairs) {
    for (int id : {pair.view_i, pair.view_j}) {
      if (!cvcs.count(id)) {
        cvcs.emplace(id, unproject_cvc(views[view_index.at(id)], cell));
        out.distinct_views.push_back(id);
      }
    }
  }
  std::sort(out.distinct_views.begin(), out.distinct_views.end());

  std::vector<ProbabilityVolume> volumes;
  std::vector<double> weights;
  volumes.reserve(out.pairs.size());
  for (const ViewPairScore& pair : out.pairs) {
    volumes.push_back(
        predictor(cvcs.at(pair.view_i), cvcs.at(pair.view_j), config.predictor));
    weights.push_back(pair.weight);
  }
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) {
    std::fill(weights.begin(), weights.end(), 1.0);  // textureless fallback
  }
  std::vector<const ProbabilityVolume*> ptrs;
  for (const auto& v : volumes) ptrs.push_back(&v);
  out.fused = fuse_weighted(weights, ptrs);
  out.valid = true;
  return out;
}

}  // namespace

ReconstructionResult reconstruct(const std::vector<CameraView>& views,
                                 const Box& bbox, const PipelineConfig& config) {
  if (views.size() < 2) {
    throw std::runtime_error("insufficient-views");
  }
  if (!((bbox.size.array() > 0).all())) {
    throw std::runtime_error("invalid-partition");
  }

  const ResolutionSchedule schedule =
      make_schedule(config.r1, config.delta, config.target_resolution);
  const int finest = schedule.finest_level();
  const double r_finest = schedule.resolution_at(finest);
  const RelativeWeightFunction scorer = scorer_by_name(config.scorer);
  const PredictorFunction predictor = predictor_by_name(config.predictor.name);

  ReconstructionResult result;
  result.ledger.dense_baseline =
      dense_cell_count(bbox, config.s, r_finest, config.overlap_voxels);
  result.ledger.relative_resolution = bbox.size.maxCoeff() / r_finest;

  SurfacePointCloud prev;
  for (int k = 1; k <= finest; ++k) {
    const double r_k = schedule.resolution_at(k);

    // Per-stage Gaussian blur spreads local texture to the voxel footprint.
    double blur_sigma = r_k / r_finest;
    auto it = config.predictor.blur_sigma_per_level.find(k);
    if (it != config.predictor.blur_sigma_per_level.end()) blur_sigma = it->second;
    std::vector<CameraView> level_views = views;
    if (blur_sigma > 0.0) {
      parallel_for(level_views.size(), config.threads, [&](std::size_t i) {
        level_views[i].image = gaussian_blur(level_views[i].image, blur_sigma);
      });
    }

    Partition partition =
        k == 1 ? initial_partition(bbox, config.s, config.r1, config.overlap_voxels)
               : refine_partition(bbox, prev, schedule, k, config.s,
                                  config.overlap_voxels);
    result.ledger.record(k, static_cast<int64_t>(partition.cells.size()),
                         static_cast<int64_t>(partition.cells.size()));

    if (partition.cells.empty()) {
      result.empty_level_warning = true;
      result.final_cloud = SurfacePointCloud{finest, {}, r_finest};
      return result;
    }

    const SurfacePointCloud* prev_ptr = k == 1 ? nullptr : &prev;
    std::vector<CellOutput> outputs(partition.cells.size());
    parallel_for(partition.cells.size(), config.threads, [&](std::size_t i) {
      outputs[i] = process_cell(partition.cells[i], level_views, prev_ptr, config,
                                scorer, predictor);
    });

    const bool pool_here =
        config.ray_pool && (config.ray_pool_levels == "all" || k == finest);
    const double tau_k = k == finest ? config.tau : config.tau_intermediate;

    if (k == finest) {
      // Saturation check: a mostly-occupied finest level means the predictor
      // had no texture contrast to work with.
      std::size_t occupied = 0, total = 0;
      for (const CellOutput& out : outputs) {
        if (!out.valid) continue;
        for (double p : out.fused.probs) {
          if (p > tau_k) ++occupied;
          ++total;
        }
      }
      if (total > 0 && occupied > total / 2) {
        result.degenerate_precision_warning = true;
      }
      for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (outputs[i].valid) {
          result.final_selections.push_back(
              {partition.cells[i], outputs[i].pairs});
        }
      }
    }

    SurfacePointCloud level_cloud;
    if (!pool_here) {
      std::vector<std::pair<SubVolume, ProbabilityVolume>> cells;
      for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (outputs[i].valid) {
          cells.emplace_back(partition.cells[i], std::move(outputs[i].fused));
        }
      }
      level_cloud = surface_from_probability(cells, tau_k);
    } else {
      // Thin per cell, then union across overlapping cells.
      const Vec3 anchor = partition.cells.front().origin;
      std::map<std::tuple<long long, long long, long long>, Vec3> kept;
      for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (!outputs[i].valid) continue;
        const SubVolume& sv = partition.cells[i];
        // Every distinct view of the selected pairs votes; a voxel survives only
        // when it wins in each view that sees it.
        // Pixel groups are formed at the voxel footprint: when one voxel spans
        // several image pixels, the intrinsics are scaled down so that rays are
        // bundled one-per-voxel-footprint instead of one-per-sensor-pixel.
        std::vector<CameraView> pool_cams;
        for (int id : outputs[i].distinct_views) {
          for (const CameraView& v : level_views) {
            if (v.id != id) continue;
            CameraView pooled = v;
            const double dist = (sv.center() - v.center()).norm();
            const double footprint =
                dist > 0.0 ? v.intrinsics(0, 0) * sv.resolution / dist : 1.0;
            if (footprint > 1.0) {
              const double scale = 1.0 / footprint;
              pooled.intrinsics.row(0) *= scale;
              pooled.intrinsics.row(1) *= scale;
              pooled.image.width = std::max(
                  1, static_cast<int>(std::ceil(v.image.width * scale)));
              pooled.image.height = std::max(
                  1, static_cast<int>(std::ceil(v.image.height * scale)));
              pooled.image.data.clear();
            }
            pool_cams.push_back(std::move(pooled));
          }
        }
        std::vector<const CameraView*> pool_views;
        for (const CameraView& v : pool_cams) pool_views.push_back(&v);
        OccupancyGrid occ = threshold_binarize(outputs[i].fused, tau_k);
        occ = ray_pool_multi(outputs[i].fused, occ, pool_views, tau_k);
        const int s = sv.side_voxels;
        for (int iz = 0; iz < s; ++iz) {
          for (int iy = 0; iy < s; ++iy) {
            for (int ix = 0; ix < s; ++ix) {
              if (!occ.occupied[sv.linear_index(ix, iy, iz)]) continue;
              const Vec3 c = sv.voxel_center(ix, iy, iz);
              const Vec3 rel = (c - anchor) / sv.resolution;
              kept.emplace(std::make_tuple(std::llround(rel.z() - 0.5),
                                           std::llround(rel.y() - 0.5),
                                           std::llround(rel.x() - 0.5)),
                           c);
            }
          }
        }
      }
      level_cloud.level = k;
      level_cloud.resolution = r_k;
      for (const auto& [key, c] : kept) level_cloud.points.push_back(c);
    }
    level_cloud.level = k;
    level_cloud.resolution = r_k;

    result.per_level.push_back(level_cloud);
    if (level_cloud.points.empty()) {
      result.empty_level_warning = true;
      result.final_cloud = SurfacePointCloud{finest, {}, r_finest};
      return result;
    }
    prev = level_cloud;
  }

  result.final_cloud = result.per_level.back();
  return result;
}

}  // namespace voxmvs
