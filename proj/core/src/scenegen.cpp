#include "voxmvs/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>

namespace voxmvs {

namespace {

Box shape_bounds(const Shape& shape) {
  Box b;
  if (const auto* s = std::get_if<SphereShape>(&shape)) {
    b.min = s->center - s->radius * Vec3::Ones();
    b.size = 2.0 * s->radius * Vec3::Ones();
  } else if (const auto* box = std::get_if<BoxShape>(&shape)) {
    b.min = box->min;
    b.size = box->max - box->min;
  } else {
    const auto& patch = std::get<PlanePatch>(shape);
    b.min = patch.point - patch.extent * Vec3::Ones();
    b.size = 2.0 * patch.extent * Vec3::Ones();
  }
  return b;
}

void patch_axes(const PlanePatch& patch, Vec3& u, Vec3& v) {
  const Vec3 n = patch.normal.normalized();
  Vec3 ref = std::abs(n.z()) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
  u = n.cross(ref).normalized();
  v = n.cross(u);
}

double shape_surface_distance(const Shape& shape, const Vec3& p) {
  if (const auto* s = std::get_if<SphereShape>(&shape)) {
    return std::abs((p - s->center).norm() - s->radius);
  }
  if (const auto* box = std::get_if<BoxShape>(&shape)) {
    const Vec3 c = 0.5 * (box->min + box->max);
    const Vec3 h = 0.5 * (box->max - box->min);
    const Vec3 q = (p - c).cwiseAbs() - h;
    const double outside = q.cwiseMax(0.0).norm();
    const double inside = std::min(0.0, q.maxCoeff());
    return std::abs(outside + inside);
  }
  const auto& patch = std::get<PlanePatch>(shape);
  Vec3 u, v;
  patch_axes(patch, u, v);
  const Vec3 rel = p - patch.point;
  const double du = std::clamp(rel.dot(u), -patch.extent, patch.extent);
  const double dv = std::clamp(rel.dot(v), -patch.extent, patch.extent);
  const Vec3 closest = patch.point + du * u + dv * v;
  return (p - closest).norm();
}

std::optional<double> ray_shape(const Shape& shape, const Vec3& o, const Vec3& d) {
  constexpr double kTmin = 1e-9;
  if (const auto* s = std::get_if<SphereShape>(&shape)) {
    const Vec3 oc = o - s->center;
    const double b = oc.dot(d);
    const double c = oc.squaredNorm() - s->radius * s->radius;
    const double disc = b * b - c;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double t0 = -b - sq;
    const double t1 = -b + sq;
    if (t0 > kTmin) return t0;
    if (t1 > kTmin) return t1;
    return std::nullopt;
  }
  if (const auto* box = std::get_if<BoxShape>(&shape)) {
    double tmin = kTmin, tmax = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
      if (std::abs(d[a]) < 1e-15) {
        if (o[a] < box->min[a] || o[a] > box->max[a]) return std::nullopt;
        continue;
      }
      double t0 = (box->min[a] - o[a]) / d[a];
      double t1 = (box->max[a] - o[a]) / d[a];
      if (t0 > t1) std::swap(t0, t1);
      tmin = std::max(tmin, t0);
      tmax = std::min(tmax, t1);
      if (tmin > tmax) return std::nullopt;
    }
    return tmin;
  }
  const auto& patch = std::get<PlanePatch>(shape);
  const Vec3 n = patch.normal.normalized();
  const double denom = n.dot(d);
  if (std::abs(denom) < 1e-15) return std::nullopt;
  const double t = n.dot(patch.point - o) / denom;
  if (t <= kTmin) return std::nullopt;
  Vec3 u, v;
  patch_axes(patch, u, v);
  const Vec3 rel = o + t * d - patch.point;
  if (std::abs(rel.dot(u)) > patch.extent || std::abs(rel.dot(v)) > patch.extent) {
    return std::nullopt;
  }
  return t;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Box SceneSpec::reconstruction_bbox(double margin) const {
  if (bbox) {
    return *bbox;
  }
  if (shapes.empty()) {
    throw std::runtime_error("invalid-scene");
  }
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  auto merge = [&](const Shape& shape) {
    const Box b = shape_bounds(shape);
    lo = lo.cwiseMin(b.min);
    hi = hi.cwiseMax(b.max());
  };
  for (const Shape& s : shapes) merge(s);
  for (const Shape& s : occluders) merge(s);
  Box out;
  out.min = lo - margin * Vec3::Ones();
  out.size = (hi - lo) + 2.0 * margin * Vec3::Ones();
  return out;
}

double scene_surface_distance(const SceneSpec& spec, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const Shape& shape : spec.shapes) {
    best = std::min(best, shape_surface_distance(shape, p));
  }
  return best;
}

Vec3 texture_color(const Texture& texture, const Vec3& p) {
  if (const auto* checker = std::get_if<CheckerTexture>(&texture)) {
    const long long ix = static_cast<long long>(std::floor(p.x() / checker->period));
    const long long iy = static_cast<long long>(std::floor(p.y() / checker->period));
    const long long iz = static_cast<long long>(std::floor(p.z() / checker->period));
    return ((ix + iy + iz) & 1) ? checker->color_b : checker->color_a;
  }
  if (const auto* noise = std::get_if<NoiseTexture>(&texture)) {
    Vec3 accum = Vec3::Zero();
    double amplitude = 1.0;
    double total = 0.0;
    double scale = noise->scale;
    for (int o = 0; o < std::max(1, noise->octaves); ++o) {
      const long long ix = static_cast<long long>(std::floor(p.x() / scale));
      const long long iy = static_cast<long long>(std::floor(p.y() / scale));
      const long long iz = static_cast<long long>(std::floor(p.z() / scale));
      uint64_t h = noise->seed + static_cast<uint64_t>(o) * 0x9e3779b97f4a7c15ull;
      h = splitmix64(h ^ static_cast<uint64_t>(ix));
      h = splitmix64(h ^ static_cast<uint64_t>(iy));
      h = splitmix64(h ^ static_cast<uint64_t>(iz));
      accum += amplitude * Vec3((h & 0xff) / 255.0, ((h >> 8) & 0xff) / 255.0,
                                ((h >> 16) & 0xff) / 255.0);
      total += amplitude;
      amplitude *= noise->persistence;
      scale /= std::max(1.0, noise->lacunarity);
    }
    return accum / total;
  }
  const auto& grad = std::get<GradientTexture>(texture);
  const double t =
      std::clamp(0.5 + p[grad.axis] / (2.0 * grad.span), 0.0, 1.0);
  return (1.0 - t) * grad.low + t * grad.high;
}

std::optional<double> raycast(const SceneSpec& spec, const Vec3& origin,
                              const Vec3& dir, bool include_occluders) {
  std::optional<double> best;
  auto consider = [&](const Shape& shape) {
    const auto t = ray_shape(shape, origin, dir);
    if (t && (!best || *t < *best)) best = t;
  };
  for (const Shape& s : spec.shapes) consider(s);
  if (include_occluders) {
    for (const Shape& s : spec.occluders) consider(s);
  }
  return best;
}

bool segment_hits_occluder(const SceneSpec& spec, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double len = d.norm();
  if (len < 1e-12) return false;
  const Vec3 dir = d / len;
  for (const Shape& s : spec.occluders) {
    const auto t = ray_shape(s, a, dir);
    if (t && *t < len - 1e-9) return true;
  }
  return false;
}

std::vector<CameraView> render(const SceneSpec& spec) {
  if (spec.shapes.empty() && spec.occluders.empty()) {
    throw std::runtime_error("invalid-scene");
  }
  std::vector<CameraView> views;
  if (!spec.explicit_cameras.empty()) {
    views = spec.explicit_cameras;
  } else {
    const RingRig& rig = spec.rig;
    if (rig.num_cameras < 2) {
      throw std::runtime_error("invalid-scene");
    }
    for (int i = 0; i < rig.num_cameras; ++i) {
      const double phi = 2.0 * M_PI * i / rig.num_cameras;
      const Vec3 pos = rig.look_at + Vec3(rig.radius * std::cos(phi),
                                          rig.radius * std::sin(phi), rig.height);
      CameraView cam;
      cam.id = i;
      Vec3 forward = (rig.look_at - pos).normalized();
      Vec3 right = forward.cross(Vec3(0, 0, 1));
      if (right.norm() < 1e-9) right = Vec3(1, 0, 0);
      right.normalize();
      const Vec3 down = forward.cross(right);
      Mat3 rot;
      rot.row(0) = right.transpose();
      rot.row(1) = down.transpose();
      rot.row(2) = forward.transpose();
      cam.rotation = rot;
      cam.translation = -rot * pos;
      Mat3 k = Mat3::Identity();
      k(0, 0) = rig.focal_px;
      k(1, 1) = rig.focal_px;
      k(0, 2) = spec.image_width / 2.0;
      k(1, 2) = spec.image_height / 2.0;
      cam.intrinsics = k;
      views.push_back(cam);
    }
  }

  for (CameraView& cam : views) {
    Image img;
    img.width = spec.image_width;
    img.height = spec.image_height;
    img.data.assign(static_cast<std::size_t>(3) * img.width * img.height, 0.0f);
    const Mat3 k_inv = cam.intrinsics.inverse();
    const Mat3 rot_t = cam.rotation.transpose();
    const Vec3 center = cam.center();
    // 3x3 supersampling keeps texture edges from aliasing across views.
    constexpr int kSub = 3;
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        Vec3 accum = Vec3::Zero();
        for (int sy = 0; sy < kSub; ++sy) {
          for (int sx = 0; sx < kSub; ++sx) {
            const double du = (sx - (kSub - 1) * 0.5) / kSub;
            const double dv = (sy - (kSub - 1) * 0.5) / kSub;
            const Vec3 dir_cam = k_inv * Vec3(x + du, y + dv, 1.0);
            const Vec3 dir = (rot_t * dir_cam).normalized();
            const auto t = raycast(spec, center, dir);
            if (!t) continue;
            const Vec3 hit = center + *t * dir;
            accum += texture_color(spec.texture, hit);
          }
        }
        const Vec3 color = accum / (kSub * kSub);
        float* px = img.pixel(x, y);
        px[0] = static_cast<float>(std::clamp(color.x(), 0.0, 1.0));
        px[1] = static_cast<float>(std::clamp(color.y(), 0.0, 1.0));
        px[2] = static_cast<float>(std::clamp(color.z(), 0.0, 1.0));
      }
    }
    cam.image = std::move(img);
  }
  return views;
}

SurfacePointCloud ground_truth_cloud(const SceneSpec& spec, double resolution) {
  if (!(resolution > 0.0)) {
    throw std::runtime_error("invalid-resolution");
  }
  const Box bbox = spec.reconstruction_bbox();
  const double occupy_dist = 0.5 * std::sqrt(3.0) * resolution;
  SurfacePointCloud cloud;
  cloud.resolution = resolution;

  std::set<std::tuple<long long, long long, long long>> keys;
  for (const Shape& shape : spec.shapes) {
    Box sb = shape_bounds(shape);
    sb.min -= 2.0 * resolution * Vec3::Ones();
    sb.size += 4.0 * resolution * Vec3::Ones();
    long long lo[3], hi[3];
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::max<long long>(
          0, static_cast<long long>(std::floor((sb.min[a] - bbox.min[a]) / resolution)));
      hi[a] = std::min<long long>(
          static_cast<long long>(std::ceil(bbox.size[a] / resolution)) - 1,
          static_cast<long long>(std::ceil((sb.min[a] + sb.size[a] - bbox.min[a]) /
                                           resolution)));
    }
    for (long long iz = lo[2]; iz <= hi[2]; ++iz) {
      for (long long iy = lo[1]; iy <= hi[1]; ++iy) {
        for (long long ix = lo[0]; ix <= hi[0]; ++ix) {
          const Vec3 c = bbox.min + resolution * Vec3(ix + 0.5, iy + 0.5, iz + 0.5);
          if (shape_surface_distance(shape, c) <= occupy_dist) {
            keys.emplace(iz, iy, ix);
          }
        }
      }
    }
  }
  for (const auto& [iz, iy, ix] : keys) {
    cloud.points.push_back(bbox.min + resolution * Vec3(ix + 0.5, iy + 0.5, iz + 0.5));
  }
  return cloud;
}

GroundTruthVolume ground_truth_volume(const SceneSpec& spec,
                                      const SubVolume& subvolume) {
  GroundTruthVolume gt;
  gt.subvolume = subvolume;
  gt.occupancy.assign(subvolume.voxel_count(), 0);
  const double occupy_dist = 0.5 * std::sqrt(3.0) * subvolume.resolution;
  const int s = subvolume.side_voxels;
  for (int iz = 0; iz < s; ++iz) {
    for (int iy = 0; iy < s; ++iy) {
      for (int ix = 0; ix < s; ++ix) {
        const Vec3 c = subvolume.voxel_center(ix, iy, iz);
        if (scene_surface_distance(spec, c) <= occupy_dist) {
          gt.occupancy[subvolume.linear_index(ix, iy, iz)] = 1;
        }
      }
    }
  }
  return gt;
}

}  // namespace voxmvs
