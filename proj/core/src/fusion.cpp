#include "voxmvs/fusion.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace voxmvs {

ProbabilityVolume fuse_weighted(const std::vector<double>& weights,
                                const std::vector<const ProbabilityVolume*>& volumes) {
  if (volumes.empty() || weights.size() != volumes.size()) {
    throw std::runtime_error("cvc-mismatch");
  }
  const SubVolume& sv = volumes.front()->subvolume;
  double total = 0.0;
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    if (!volumes[i]->subvolume.same_grid(sv)) {
      throw std::runtime_error("cvc-mismatch");
    }
    if (weights[i] < 0.0) {
      throw std::runtime_error("zero-weight");
    }
    total += weights[i];
  }
  if (!(total > 0.0)) {
    throw std::runtime_error("zero-weight");
  }

  ProbabilityVolume out;
  out.subvolume = sv;
  out.probs.assign(sv.voxel_count(), 0.0);
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    const double w = weights[i] / total;
    const auto& probs = volumes[i]->probs;
    for (std::size_t v = 0; v < out.probs.size(); ++v) {
      out.probs[v] += w * probs[v];
    }
  }
  return out;
}

ProbabilityVolume fuse(
    const std::vector<std::pair<ViewPairScore, ProbabilityVolume>>& predictions) {
  std::vector<double> weights;
  std::vector<const ProbabilityVolume*> volumes;
  weights.reserve(predictions.size());
  volumes.reserve(predictions.size());
  for (const auto& [score, vol] : predictions) {
    weights.push_back(score.weight);
    volumes.push_back(&vol);
  }
  return fuse_weighted(weights, volumes);
}

OccupancyGrid threshold_binarize(const ProbabilityVolume& volume, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::runtime_error("invalid-tau");
  }
  OccupancyGrid grid = OccupancyGrid::empty(volume.subvolume);
  for (std::size_t i = 0; i < volume.probs.size(); ++i) {
    grid.occupied[i] = volume.probs[i] > tau ? 1 : 0;
  }
  return grid;
}

OccupancyGrid ray_pool_multi(const ProbabilityVolume& volume,
                             const OccupancyGrid& occupancy,
                             const std::vector<const CameraView*>& views,
                             double tau) {
  if (!volume.subvolume.same_grid(occupancy.subvolume)) {
    throw std::runtime_error("cvc-mismatch");
  }
  const SubVolume& sv = volume.subvolume;
  const int s = sv.side_voxels;
  const std::size_t n = sv.voxel_count();

  // votes[i] == number of views seeing voxel i that elected it
  std::vector<int> votes(n, 0);
  std::vector<int> seen(n, 0);

  for (const CameraView* view : views) {
    std::map<std::pair<long, long>, std::size_t> winner;  // pixel -> voxel
    for (int iz = 0; iz < s; ++iz) {
      for (int iy = 0; iy < s; ++iy) {
        for (int ix = 0; ix < s; ++ix) {
          const std::size_t idx = sv.linear_index(ix, iy, iz);
          const auto pix = project(*view, sv.voxel_center(ix, iy, iz));
          if (!pix) continue;
          const long u = std::lround(pix->x());
          const long v = std::lround(pix->y());
          if (u < 0 || v < 0 || u >= view->image.width || v >= view->image.height) {
            continue;
          }
          ++seen[idx];
          const auto key = std::make_pair(u, v);
          auto [it, inserted] = winner.emplace(key, idx);
          if (!inserted && volume.probs[idx] > volume.probs[it->second]) {
            it->second = idx;  // ties keep the smaller linear index
          }
        }
      }
    }
    for (const auto& [pixel, idx] : winner) {
      ++votes[idx];
    }
  }

  OccupancyGrid out = OccupancyGrid::empty(sv);
  for (std::size_t i = 0; i < n; ++i) {
    out.occupied[i] =
        occupancy.occupied[i] && volume.probs[i] > tau && votes[i] == seen[i] ? 1 : 0;
  }
  return out;
}

OccupancyGrid ray_pool(const ProbabilityVolume& volume, const OccupancyGrid& occupancy,
                       const CameraView& view_i, const CameraView& view_j, double tau) {
  return ray_pool_multi(volume, occupancy, {&view_i, &view_j}, tau);
}

}  // namespace voxmvs
