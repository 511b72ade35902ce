#include "voxmvs/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace voxmvs {

ResolutionSchedule make_schedule(double r1, int delta, double target) {
  if (!(r1 > 0.0) || !(target > 0.0) || r1 < target || delta < 2) {
    throw std::runtime_error("invalid-schedule");
  }
  ResolutionSchedule schedule;
  schedule.common_ratio = delta;
  schedule.target_resolution = target;
  double r = r1;
  int k = 1;
  schedule.levels.emplace_back(k, r);
  while (r > target * (1.0 + 1e-12)) {
    r /= delta;
    ++k;
    schedule.levels.emplace_back(k, r);
  }
  return schedule;
}

std::vector<double> lattice_positions(double extent, double side, double stride,
                                      double resolution) {
  std::vector<double> positions;
  const double eps = 1e-9 * std::max(1.0, extent);
  if (extent <= side + eps) {
    positions.push_back(0.0);
    return positions;
  }
  double p = 0.0;
  while (p + side < extent - eps) {
    positions.push_back(p);
    p += stride;
  }
  // Clamped last cell, snapped up to the voxel lattice so voxel centers of
  // all cells stay on one global grid.
  double last = std::ceil((extent - side) / resolution - 1e-9) * resolution;
  if (positions.empty() || last > positions.back() + eps) {
    positions.push_back(last);
  }
  return positions;
}

namespace {

Partition lattice_partition(const Box& bbox, int level, double resolution, int s,
                            int overlap_voxels) {
  if (s <= 0 || overlap_voxels < 0 || overlap_voxels >= s) {
    throw std::runtime_error("invalid-partition");
  }
  if (!((bbox.size.array() > 0).all())) {
    throw std::runtime_error("invalid-partition");
  }
  const double side = s * resolution;
  const double stride = (s - overlap_voxels) * resolution;
  Partition part;
  part.level = level;
  part.stride = stride;
  std::array<std::vector<double>, 3> axis;
  for (int a = 0; a < 3; ++a) {
    axis[a] = lattice_positions(bbox.size[a], side, stride, resolution);
  }
  for (double pz : axis[2]) {
    for (double py : axis[1]) {
      for (double px : axis[0]) {
        SubVolume sv;
        sv.level = level;
        sv.origin = bbox.min + Vec3(px, py, pz);
        sv.resolution = resolution;
        sv.side_voxels = s;
        sv.overlap_voxels = overlap_voxels;
        part.cells.push_back(sv);
      }
    }
  }
  return part;
}

// Indices of lattice cells along one axis whose [pos, pos+side] interval
// contains x; x beyond the lattice is clamped to the nearest cell.
void covering_indices(const std::vector<double>& positions, double side, double x,
                      std::vector<int>& out) {
  out.clear();
  const double eps = 1e-9 * std::max(1.0, side);
  for (int i = 0; i < static_cast<int>(positions.size()); ++i) {
    if (x >= positions[i] - eps && x <= positions[i] + side + eps) {
      out.push_back(i);
    }
  }
  if (out.empty()) {
    out.push_back(x < positions.front() ? 0
                                        : static_cast<int>(positions.size()) - 1);
  }
}

}  // namespace

Partition initial_partition(const Box& bbox, int s, double r1, int overlap_voxels) {
  return lattice_partition(bbox, 1, r1, s, overlap_voxels);
}

Partition refine_partition(const Box& bbox, const SurfacePointCloud& prev_surface,
                           const ResolutionSchedule& schedule, int k, int s,
                           int overlap_voxels) {
  if (k < 2 || k > schedule.finest_level()) {
    throw std::runtime_error("invalid-partition");
  }
  const double resolution = schedule.resolution_at(k);
  const double side = s * resolution;
  const double stride = (s - overlap_voxels) * resolution;

  Partition part;
  part.level = k;
  part.stride = stride;
  if (prev_surface.points.empty()) {
    return part;
  }

  std::array<std::vector<double>, 3> axis;
  for (int a = 0; a < 3; ++a) {
    axis[a] = lattice_positions(bbox.size[a], side, stride, resolution);
  }

  std::set<std::tuple<int, int, int>> occupied;
  std::array<std::vector<int>, 3> idx;
  for (const Vec3& p : prev_surface.points) {
    const Vec3 rel = p - bbox.min;
    for (int a = 0; a < 3; ++a) {
      covering_indices(axis[a], side, rel[a], idx[a]);
    }
    for (int iz : idx[2])
      for (int iy : idx[1])
        for (int ix : idx[0]) occupied.emplace(iz, iy, ix);
  }

  for (const auto& [iz, iy, ix] : occupied) {
    SubVolume sv;
    sv.level = k;
    sv.origin = bbox.min + Vec3(axis[0][ix], axis[1][iy], axis[2][iz]);
    sv.resolution = resolution;
    sv.side_voxels = s;
    sv.overlap_voxels = overlap_voxels;
    part.cells.push_back(sv);
  }
  return part;
}

SurfacePointCloud surface_from_probability(
    const std::vector<std::pair<SubVolume, ProbabilityVolume>>& cells, double tau) {
  SurfacePointCloud cloud;
  if (cells.empty()) {
    return cloud;
  }
  const double res = cells.front().first.resolution;
  const Vec3 anchor = cells.front().first.origin;
  cloud.level = cells.front().first.level;
  cloud.resolution = res;

  struct Key {
    long long x, y, z;
    bool operator<(const Key& o) const {
      return std::tie(z, y, x) < std::tie(o.z, o.y, o.x);
    }
  };
  std::map<Key, double> best;
  for (const auto& [sv, vol] : cells) {
    if (sv.level != cloud.level || std::abs(sv.resolution - res) > 1e-12) {
      throw std::runtime_error("cvc-mismatch");
    }
    const int s = sv.side_voxels;
    for (int iz = 0; iz < s; ++iz) {
      for (int iy = 0; iy < s; ++iy) {
        for (int ix = 0; ix < s; ++ix) {
          const double p = vol.probs[sv.linear_index(ix, iy, iz)];
          const Vec3 c = sv.voxel_center(ix, iy, iz);
          const Vec3 rel = (c - anchor) / res;
          const Key key{std::llround(rel.x() - 0.5), std::llround(rel.y() - 0.5),
                        std::llround(rel.z() - 0.5)};
          auto [it, inserted] = best.emplace(key, p);
          if (!inserted && p > it->second) it->second = p;
        }
      }
    }
  }
  for (const auto& [key, p] : best) {
    if (p > tau) {
      cloud.points.push_back(anchor +
                             res * Vec3(key.x + 0.5, key.y + 0.5, key.z + 0.5));
    }
  }
  return cloud;
}

}  // namespace voxmvs
