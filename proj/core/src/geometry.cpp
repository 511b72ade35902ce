#include "voxmvs/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace voxmvs {

namespace {
constexpr double kPlaneTol = 1e-9;
}

Image Image::constant(int width, int height, float r, float g, float b) {
  Image img;
  img.width = width;
  img.height = height;
  img.data.resize(static_cast<std::size_t>(3) * width * height);
  for (std::size_t i = 0; i < img.data.size(); i += 3) {
    img.data[i] = r;
    img.data[i + 1] = g;
    img.data[i + 2] = b;
  }
  return img;
}

std::array<Vec3, 8> SubVolume::corners() const {
  const double l = side_length();
  std::array<Vec3, 8> c;
  int n = 0;
  for (int z = 0; z <= 1; ++z)
    for (int y = 0; y <= 1; ++y)
      for (int x = 0; x <= 1; ++x)
        c[n++] = origin + l * Vec3(x, y, z);
  return c;
}

bool SubVolume::same_grid(const SubVolume& other) const {
  return level == other.level && side_voxels == other.side_voxels &&
         std::abs(resolution - other.resolution) < 1e-12 &&
         (origin - other.origin).norm() < 1e-12;
}

std::optional<Vec2> project(const CameraView& camera, const Vec3& point) {
  const Vec3 cam = camera.rotation * point + camera.translation;
  if (cam.z() <= 0.0) {
    return std::nullopt;
  }
  const Vec3 h = camera.intrinsics * cam;
  return Vec2(h.x() / h.z(), h.y() / h.z());
}

ColoredVoxelCube unproject_cvc(const CameraView& camera, const SubVolume& subvolume) {
  const int s = subvolume.side_voxels;
  ColoredVoxelCube cvc;
  cvc.subvolume = subvolume;
  cvc.view_id = camera.id;
  cvc.colors.assign(3 * subvolume.voxel_count(), kInvalidVoxelGray);
  cvc.validity.assign(subvolume.voxel_count(), 0);

  const Image& img = camera.image;
  for (int iz = 0; iz < s; ++iz) {
    for (int iy = 0; iy < s; ++iy) {
      for (int ix = 0; ix < s; ++ix) {
        const auto pix = project(camera, subvolume.voxel_center(ix, iy, iz));
        if (!pix) continue;
        const long u = std::lround(pix->x());
        const long v = std::lround(pix->y());
        if (u < 0 || v < 0 || u >= img.width || v >= img.height) continue;
        const std::size_t idx = subvolume.linear_index(ix, iy, iz);
        const float* src = img.pixel(static_cast<int>(u), static_cast<int>(v));
        cvc.colors[3 * idx] = src[0];
        cvc.colors[3 * idx + 1] = src[1];
        cvc.colors[3 * idx + 2] = src[2];
        cvc.validity[idx] = 1;
      }
    }
  }
  return cvc;
}

namespace {

// All supporting planes found by checking every point triple against the rest.
std::vector<HalfSpace> supporting_planes(std::span<const Vec3> pts) {
  std::vector<HalfSpace> planes;
  const int n = static_cast<int>(pts.size());
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) scale = std::max(scale, (pts[i] - pts[j]).norm());
  const double tol = std::max(kPlaneTol, 1e-12 * scale);

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        Vec3 normal = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
        const double len = normal.norm();
        if (len < 1e-12 * scale * scale) continue;
        normal /= len;
        double lo = 0.0, hi = 0.0;
        for (int m = 0; m < n; ++m) {
          const double d = normal.dot(pts[m] - pts[i]);
          lo = std::min(lo, d);
          hi = std::max(hi, d);
        }
        double off;
        if (hi <= tol) {
          off = normal.dot(pts[i]);
        } else if (lo >= -tol) {
          normal = -normal;
          off = normal.dot(pts[i]);
        } else {
          continue;
        }
        bool dup = false;
        for (const auto& p : planes) {
          if ((p.normal - normal).norm() < 1e-9 && std::abs(p.offset - off) < tol) {
            dup = true;
            break;
          }
        }
        if (!dup) planes.push_back({normal, off});
      }
    }
  }
  return planes;
}

bool inside_planes(const std::vector<HalfSpace>& planes, const Vec3& p, double tol) {
  for (const auto& h : planes) {
    if (h.normal.dot(p) > h.offset + tol) return false;
  }
  return true;
}

}  // namespace

ConvexHull convex_hull(std::span<const Vec3> points) {
  ConvexHull hull;
  hull.faces = supporting_planes(points);

  // A point is a hull vertex iff it lies strictly outside the hull of the rest.
  const int n = static_cast<int>(points.size());
  std::vector<Vec3> rest;
  rest.reserve(n - 1);
  for (int i = 0; i < n; ++i) {
    rest.clear();
    for (int j = 0; j < n; ++j)
      if (j != i) rest.push_back(points[j]);
    const auto planes = supporting_planes(rest);
    if (!inside_planes(planes, points[i], 1e-9)) {
      hull.vertices.push_back(points[i]);
    }
  }
  return hull;
}

ConvexHull view_hull(const SubVolume& subvolume, const CameraView& camera) {
  const auto corners = subvolume.corners();
  std::vector<Vec3> pts(corners.begin(), corners.end());
  pts.push_back(camera.center());
  return convex_hull(pts);
}

bool hull_contains(const ConvexHull& hull, const Vec3& point) {
  return inside_planes(hull.faces, point, 1e-9);
}

double baseline_angle(const SubVolume& subvolume, const CameraView& view_i,
                      const CameraView& view_j) {
  const Vec3 c = subvolume.center();
  const Vec3 a = view_i.center() - c;
  const Vec3 b = view_j.center() - c;
  if (a.norm() < 1e-15 || b.norm() < 1e-15) {
    throw std::runtime_error("degenerate-baseline");
  }
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace voxmvs
