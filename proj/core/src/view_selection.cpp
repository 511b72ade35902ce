#include "voxmvs/view_selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace voxmvs {

namespace {

// Cheap cone/distance prefilter before the exact half-space test.
struct HullFilter {
  Vec3 camera;
  Vec3 axis;          // unit direction camera -> cube center
  double cos_half = -1.0;  // cone half-angle covering the cube bounding sphere
  double max_dist = 0.0;
  bool cone_valid = false;

  HullFilter(const SubVolume& sv, const Vec3& cam) : camera(cam) {
    const Vec3 c = sv.center();
    const double bounding = 0.5 * std::sqrt(3.0) * sv.side_length();
    for (const Vec3& corner : sv.corners()) {
      max_dist = std::max(max_dist, (corner - cam).norm());
    }
    const double d = (c - cam).norm();
    if (d > bounding) {
      axis = (c - cam) / d;
      cos_half = std::cos(std::asin(std::min(1.0, bounding / d)));
      cone_valid = true;
    }
  }

  bool may_contain(const Vec3& p) const {
    const Vec3 rel = p - camera;
    const double dist = rel.norm();
    if (dist > max_dist + 1e-9) return false;
    if (cone_valid && dist > 1e-12) {
      if (axis.dot(rel) / dist < cos_half - 1e-9) return false;
    }
    return true;
  }
};

}  // namespace

std::vector<Vec3> barrier_points(const SurfacePointCloud& prev_surface,
                                 const SubVolume& subvolume,
                                 const CameraView& camera) {
  std::vector<Vec3> result;
  if (prev_surface.points.empty()) return result;
  const ConvexHull hull = view_hull(subvolume, camera);
  const HullFilter filter(subvolume, camera.center());
  for (const Vec3& p : prev_surface.points) {
    if (subvolume.contains(p)) continue;  // boundary of C counts as inside C
    if (!filter.may_contain(p)) continue;
    if (hull_contains(hull, p)) {
      result.push_back(p);
    }
  }
  return result;
}

double occlusion_probability(int count_i, int count_j, double alpha, double r_k) {
  if (count_i < 0 || count_j < 0 || alpha < 0.0 || !(r_k > 0.0)) {
    throw std::runtime_error("invalid-occlusion-args");
  }
  return std::exp(-alpha * r_k * r_k * (count_i + count_j));
}

PatchDescriptor patch_descriptor(const CameraView& camera,
                                 const SubVolume& subvolume, int patch_side) {
  if (patch_side < 8 || patch_side % 2 != 0) {
    throw std::runtime_error("invalid-patch-side");
  }
  PatchDescriptor desc;
  desc.view_id = camera.id;

  const auto pix = project(camera, subvolume.center());
  if (!pix) return desc;
  const long cu = std::lround(pix->x());
  const long cv = std::lround(pix->y());
  const int half = patch_side / 2;
  const Image& img = camera.image;
  if (cu - half < 0 || cv - half < 0 || cu + half > img.width ||
      cv + half > img.height) {
    return desc;
  }

  const int x0 = static_cast<int>(cu) - half;
  const int y0 = static_cast<int>(cv) - half;
  const int n = patch_side * patch_side;

  double mean[3] = {0, 0, 0};
  for (int y = y0; y < y0 + patch_side; ++y) {
    for (int x = x0; x < x0 + patch_side; ++x) {
      const float* px = img.pixel(x, y);
      for (int c = 0; c < 3; ++c) mean[c] += px[c];
    }
  }
  for (double& m : mean) m /= n;

  double var[3] = {0, 0, 0};
  double hist[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  for (int y = y0; y < y0 + patch_side; ++y) {
    for (int x = x0; x < x0 + patch_side; ++x) {
      const float* px = img.pixel(x, y);
      double gray = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double d = px[c] - mean[c];
        var[c] += d * d;
        gray += px[c];
      }
      gray /= 3.0;
      const int bin = std::min(7, static_cast<int>(gray * 8.0));
      hist[bin] += 1.0;
    }
  }

  auto gray_at = [&](int x, int y) {
    const float* px = img.pixel(x, y);
    return (px[0] + px[1] + px[2]) / 3.0;
  };
  double grad_sum = 0.0;
  int grad_count = 0;
  for (int y = y0 + 1; y < y0 + patch_side - 1; ++y) {
    for (int x = x0 + 1; x < x0 + patch_side - 1; ++x) {
      const double gx = 0.5 * (gray_at(x + 1, y) - gray_at(x - 1, y));
      const double gy = 0.5 * (gray_at(x, y + 1) - gray_at(x, y - 1));
      grad_sum += std::sqrt(gx * gx + gy * gy);
      ++grad_count;
    }
  }

  int idx = 0;
  for (int c = 0; c < 3; ++c) desc.values[idx++] = mean[c];
  for (int c = 0; c < 3; ++c) desc.values[idx++] = std::sqrt(var[c] / n);
  for (int b = 0; b < 8; ++b) desc.values[idx++] = hist[b] / n;
  desc.values[idx++] = grad_count > 0 ? grad_sum / grad_count : 0.0;

  double norm = 0.0;
  for (double v : desc.values) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& v : desc.values) v /= norm;
    desc.valid = true;
  }
  return desc;
}

RelativeWeightFunction make_angle_scorer(double theta0_deg, double sigma_deg) {
  const double theta0 = theta0_deg * std::numbers::pi / 180.0;
  const double sigma = sigma_deg * std::numbers::pi / 180.0;
  return [theta0, sigma](double theta, const PatchDescriptor& e_i,
                         const PatchDescriptor& e_j) {
    if (!e_i.valid || !e_j.valid) return 0.0;
    double dot = 0.0;
    for (std::size_t k = 0; k < e_i.values.size(); ++k) {
      dot += e_i.values[k] * e_j.values[k];
    }
    const double similarity = std::max(0.0, dot);
    const double d = theta - theta0;
    return similarity * std::exp(-d * d / (2.0 * sigma * sigma));
  };
}

double default_scorer(double theta, const PatchDescriptor& e_i,
                      const PatchDescriptor& e_j) {
  static const RelativeWeightFunction fn =
      make_angle_scorer(kDefaultScorerThetaPeakDeg, kDefaultScorerThetaSigmaDeg);
  return fn(theta, e_i, e_j);
}

double photometric_score(double theta, const PatchDescriptor& e_i,
                         const PatchDescriptor& e_j,
                         const RelativeWeightFunction& scorer) {
  return scorer(theta, e_i, e_j);
}

namespace {
std::map<std::string, RelativeWeightFunction>& scorer_registry() {
  static std::map<std::string, RelativeWeightFunction> registry = {
      {"default", default_scorer},
      // Ring rigs subtend wide baselines; this variant peaks there.
      {"wide-baseline", make_angle_scorer(60.0, 30.0)}};
  return registry;
}
std::mutex scorer_mutex;
}  // namespace

void register_scorer(const std::string& name, RelativeWeightFunction fn) {
  std::lock_guard<std::mutex> lock(scorer_mutex);
  scorer_registry()[name] = std::move(fn);
}

RelativeWeightFunction scorer_by_name(const std::string& name) {
  std::lock_guard<std::mutex> lock(scorer_mutex);
  auto it = scorer_registry().find(name);
  if (it == scorer_registry().end()) {
    throw std::runtime_error("unknown-scorer");
  }
  return it->second;
}

std::vector<ViewPairScore> rank_view_pairs(const std::vector<CameraView>& views,
                                           const SubVolume& subvolume,
                                           const SurfacePointCloud* prev_surface,
                                           double alpha, int n_v,
                                           const RelativeWeightFunction& scorer,
                                           int patch_side) {
  if (views.size() < 2) {
    throw std::runtime_error("insufficient-views");
  }
  if (n_v < 1) {
    throw std::runtime_error("invalid-nv");
  }

  const int n = static_cast<int>(views.size());
  std::vector<int> barriers(n, 0);
  if (prev_surface != nullptr && !prev_surface->points.empty()) {
    for (int i = 0; i < n; ++i) {
      barriers[i] =
          static_cast<int>(barrier_points(*prev_surface, subvolume, views[i]).size());
    }
  }

  std::vector<PatchDescriptor> descriptors(n);
  for (int i = 0; i < n; ++i) {
    descriptors[i] = patch_descriptor(views[i], subvolume, patch_side);
  }

  std::vector<ViewPairScore> scores;
  scores.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ViewPairScore s;
      s.view_i = views[i].id;
      s.view_j = views[j].id;
      s.theta = baseline_angle(subvolume, views[i], views[j]);
      s.barrier_i = barriers[i];
      s.barrier_j = barriers[j];
      s.p_occ = prev_surface != nullptr
                    ? occlusion_probability(barriers[i], barriers[j], alpha,
                                            subvolume.resolution)
                    : 1.0;
      s.photometric = photometric_score(s.theta, descriptors[i], descriptors[j], scorer);
      s.weight = s.p_occ * s.photometric;
      scores.push_back(s);
    }
  }

  std::stable_sort(scores.begin(), scores.end(),
                   [](const ViewPairScore& a, const ViewPairScore& b) {
                     if (a.weight != b.weight) return a.weight > b.weight;
                     if (a.view_i != b.view_i) return a.view_i < b.view_i;
                     return a.view_j < b.view_j;
                   });
  if (static_cast<int>(scores.size()) > n_v) {
    scores.resize(n_v);
  }
  return scores;
}

}  // namespace voxmvs
