#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "voxmvs/geometry.hpp"
#include "voxmvs/multiscale.hpp"
#include "voxmvs/volumes.hpp"

namespace voxmvs {

struct SphereShape {
  Vec3 center;
  double radius;
};

struct BoxShape {
  Vec3 min;
  Vec3 max;
};

/// Finite rectangular patch: center point, unit normal, half-extent along the
/// two tangent axes (derived deterministically from the normal).
struct PlanePatch {
  Vec3 point;
  Vec3 normal;
  double extent;
};

using Shape = std::variant<SphereShape, BoxShape, PlanePatch>;

struct CheckerTexture {
  double period = 0.25;
  Vec3 color_a = Vec3(0.95, 0.95, 0.95);
  Vec3 color_b = Vec3(0.05, 0.05, 0.05);
};

struct NoiseTexture {
  uint64_t seed = 0;
  double scale = 0.25;       // cell size of the coarsest octave
  int octaves = 1;           // number of progressively finer layers
  double persistence = 0.5;  // amplitude falloff between octaves
  double lacunarity = 2.0;   // cell-size shrink factor between octaves
};

struct GradientTexture {
  Vec3 low = Vec3(0.1, 0.1, 0.9);
  Vec3 high = Vec3(0.9, 0.9, 0.1);
  int axis = 0;
  double span = 1.0;
};

using Texture = std::variant<CheckerTexture, NoiseTexture, GradientTexture>;

struct RingRig {
  int num_cameras = 8;
  double radius = 3.0;
  double height = 0.0;
  Vec3 look_at = Vec3::Zero();
  double focal_px = 300.0;
};

struct SceneSpec {
  std::vector<Shape> shapes;
  std::vector<Shape> occluders;
  Texture texture = CheckerTexture{};
  RingRig rig;
  std::vector<CameraView> explicit_cameras;  // overrides rig when non-empty
  int image_width = 320;
  int image_height = 240;
  uint64_t seed = 0;
  std::optional<Box> bbox;  // reconstruction bounds; defaults to shape bounds

  Box reconstruction_bbox(double margin = 0.0) const;
};

/// Unsigned distance from a point to the analytic surface (shapes only).
double scene_surface_distance(const SceneSpec& spec, const Vec3& p);

/// Procedural texture color at a surface point.
Vec3 texture_color(const Texture& texture, const Vec3& p);

/// Nearest ray hit over shapes and occluders; returns hit parameter t.
std::optional<double> raycast(const SceneSpec& spec, const Vec3& origin,
                              const Vec3& dir, bool include_occluders = true);

/// True when the open segment between the two points crosses an occluder.
bool segment_hits_occluder(const SceneSpec& spec, const Vec3& a, const Vec3& b);

/// Cameras (from the rig or the explicit list) with ray-cast images.
std::vector<CameraView> render(const SceneSpec& spec);

/// Centers of all voxels at the given resolution whose cube intersects the
/// analytic surface (occluders excluded). Lattice anchored at the bbox min.
SurfacePointCloud ground_truth_cloud(const SceneSpec& spec, double resolution);

GroundTruthVolume ground_truth_volume(const SceneSpec& spec,
                                      const SubVolume& subvolume);

}  // namespace voxmvs
