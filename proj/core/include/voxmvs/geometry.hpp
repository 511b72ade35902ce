#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace voxmvs {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;

/// Interleaved RGB raster with components in [0,1].
struct Image {
  int width = 0;
  int height = 0;
  std::vector<float> data;  // 3 * width * height, row-major

  bool empty() const { return width == 0 || height == 0; }

  const float* pixel(int x, int y) const {
    return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }
  float* pixel(int x, int y) {
    return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }

  static Image constant(int width, int height, float r, float g, float b);
};

/// Axis-aligned box given by its minimum corner and edge lengths.
struct Box {
  Vec3 min = Vec3::Zero();
  Vec3 size = Vec3::Zero();

  Vec3 max() const { return min + size; }
  bool contains(const Vec3& p) const {
    return (p.array() >= min.array() - 1e-12).all() &&
           (p.array() <= max().array() + 1e-12).all();
  }
};

/// Calibrated pinhole camera with its source image.
/// rotation/translation map world points into the camera frame.
struct CameraView {
  int id = -1;
  Mat3 intrinsics = Mat3::Identity();
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  Image image;

  Vec3 center() const { return -rotation.transpose() * translation; }
};

/// An axis-aligned cube of side_voxels^3 voxels at one scale level.
struct SubVolume {
  int level = 1;
  Vec3 origin = Vec3::Zero();
  double resolution = 1.0;  // scene units per voxel
  int side_voxels = 0;
  int overlap_voxels = 0;

  double side_length() const { return side_voxels * resolution; }
  Vec3 center() const { return origin + 0.5 * side_length() * Vec3::Ones(); }
  std::array<Vec3, 8> corners() const;

  Vec3 voxel_center(int ix, int iy, int iz) const {
    return origin + resolution * Vec3(ix + 0.5, iy + 0.5, iz + 0.5);
  }
  std::size_t voxel_count() const {
    return static_cast<std::size_t>(side_voxels) * side_voxels * side_voxels;
  }
  std::size_t linear_index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(iz) * side_voxels * side_voxels +
           static_cast<std::size_t>(iy) * side_voxels + ix;
  }
  // Boundary counts as inside.
  bool contains(const Vec3& p) const {
    const Vec3 lo = origin;
    const Vec3 hi = origin + side_length() * Vec3::Ones();
    return (p.array() >= lo.array() - 1e-9).all() &&
           (p.array() <= hi.array() + 1e-9).all();
  }
  bool same_grid(const SubVolume& other) const;
};

/// One view unprojected into a sub-volume: every voxel stores the color of
/// the pixel its center projects to. Voxels behind the camera or outside the
/// image are invalid and hold mid-gray.
struct ColoredVoxelCube {
  SubVolume subvolume;
  int view_id = -1;
  std::vector<float> colors;     // 3 * s^3
  std::vector<uint8_t> validity; // s^3

  const float* color(std::size_t linear) const { return colors.data() + 3 * linear; }
};

struct HalfSpace {
  Vec3 normal;    // unit outward normal
  double offset;  // points inside satisfy normal . x <= offset
};

struct ConvexHull {
  std::vector<Vec3> vertices;
  std::vector<HalfSpace> faces;
};

inline constexpr float kInvalidVoxelGray = 0.5f;

/// Pinhole projection; nullopt when the point has non-positive depth.
std::optional<Vec2> project(const CameraView& camera, const Vec3& point);

/// Nearest-neighbor image sampling of every voxel center.
ColoredVoxelCube unproject_cvc(const CameraView& camera, const SubVolume& subvolume);

/// Exact convex hull of a small point set (brute-force face enumeration).
ConvexHull convex_hull(std::span<const Vec3> points);

/// Hull of the 8 sub-volume corners and the camera center.
ConvexHull view_hull(const SubVolume& subvolume, const CameraView& camera);

/// Half-space membership test; boundary (tolerance 1e-9) counts as inside.
bool hull_contains(const ConvexHull& hull, const Vec3& point);

/// Angle at the sub-volume center subtended by the two camera centers.
/// Throws "degenerate-baseline" if a camera center coincides with the center.
double baseline_angle(const SubVolume& subvolume, const CameraView& view_i,
                      const CameraView& view_j);

}  // namespace voxmvs
