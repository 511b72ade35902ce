#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "voxmvs/scenegen.hpp"

using namespace voxmvs;
using testsupport::make_camera;
using testsupport::random_vec3;

TEST_CASE("scene_surface_distance: analytic oracles") {
  SceneSpec sphere;
  sphere.shapes.push_back(SphereShape{Vec3(1, 2, 3), 2.0});
  CHECK(scene_surface_distance(sphere, Vec3(1, 2, 3)) == doctest::Approx(2.0));
  CHECK(scene_surface_distance(sphere, Vec3(4, 2, 3)) == doctest::Approx(1.0));
  CHECK(scene_surface_distance(sphere, Vec3(1, 2, 4.5)) == doctest::Approx(0.5));

  SceneSpec box;
  box.shapes.push_back(BoxShape{Vec3(-1, -1, -1), Vec3(1, 1, 1)});
  CHECK(box.shapes.size() == 1);
  CHECK(scene_surface_distance(box, Vec3(0, 0, 0)) == doctest::Approx(1.0));
  CHECK(scene_surface_distance(box, Vec3(2, 0, 0)) == doctest::Approx(1.0));
  CHECK(scene_surface_distance(box, Vec3(2, 2, 0)) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(scene_surface_distance(box, Vec3(0.5, 0, 0)) == doctest::Approx(0.5));

  SceneSpec plane;
  plane.shapes.push_back(PlanePatch{Vec3::Zero(), Vec3(0, 0, 1), 2.0});
  CHECK(scene_surface_distance(plane, Vec3(0, 0, 1.5)) == doctest::Approx(1.5));
  CHECK(scene_surface_distance(plane, Vec3(1, 1, 0)) == doctest::Approx(0.0));
  // Beyond the patch edge the distance is to the boundary.
  CHECK(scene_surface_distance(plane, Vec3(5, 0, 0)) == doctest::Approx(3.0));

  // Multiple shapes take the minimum.
  SceneSpec both = sphere;
  both.shapes.push_back(PlanePatch{Vec3(0, 0, -10), Vec3(0, 0, 1), 50.0});
  CHECK(scene_surface_distance(both, Vec3(1, 2, 4.5)) == doctest::Approx(0.5));
  CHECK(scene_surface_distance(both, Vec3(0, 0, -9)) == doctest::Approx(1.0));
}

TEST_CASE("texture_color: checker flips across one period") {
  const CheckerTexture checker{0.25, Vec3(0.9, 0.9, 0.9), Vec3(0.1, 0.1, 0.1)};
  const Vec3 a = texture_color(checker, Vec3(0.1, 0.1, 0.1));
  const Vec3 b = texture_color(checker, Vec3(0.35, 0.1, 0.1));
  CHECK((a - Vec3(0.9, 0.9, 0.9)).norm() == doctest::Approx(0.0));
  CHECK((b - Vec3(0.1, 0.1, 0.1)).norm() == doctest::Approx(0.0));
  // Shifting by one period along any axis flips the color.
  std::mt19937_64 rng(131);
  for (int i = 0; i < 50; ++i) {
    const Vec3 p = random_vec3(rng, -3.0, 3.0);
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 q = p;
      q[axis] += 0.25;
      CHECK((texture_color(checker, p) - texture_color(checker, q)).norm() >
            0.5);
      q[axis] += 0.25;
      CHECK((texture_color(checker, p) - texture_color(checker, q)).norm() ==
            doctest::Approx(0.0));
    }
  }
}

TEST_CASE("texture_color: noise is deterministic, seeded, and in range") {
  NoiseTexture noise;
  noise.seed = 42;
  noise.scale = 1.0;
  noise.octaves = 3;
  noise.persistence = 1.0;
  noise.lacunarity = 4.0;
  std::mt19937_64 rng(137);
  int distinct = 0;
  for (int i = 0; i < 100; ++i) {
    const Vec3 p = random_vec3(rng, -10.0, 10.0);
    const Vec3 c = texture_color(noise, p);
    CHECK((texture_color(noise, p) - c).norm() == 0.0);
    CHECK(c.minCoeff() >= 0.0);
    CHECK(c.maxCoeff() <= 1.0);
    NoiseTexture other = noise;
    other.seed = 43;
    if ((texture_color(other, p) - c).norm() > 1e-3) ++distinct;
  }
  CHECK(distinct > 90);
}

TEST_CASE("texture_color: gradient interpolates along its axis") {
  GradientTexture grad;
  grad.low = Vec3(0, 0, 0);
  grad.high = Vec3(1, 1, 1);
  grad.axis = 2;
  grad.span = 2.0;
  CHECK((texture_color(grad, Vec3(0, 0, -2)) - grad.low).norm() ==
        doctest::Approx(0.0));
  CHECK((texture_color(grad, Vec3(0, 0, 2)) - grad.high).norm() ==
        doctest::Approx(0.0));
  CHECK(texture_color(grad, Vec3(5, -7, 0)).x() == doctest::Approx(0.5));
  CHECK((texture_color(grad, Vec3(0, 0, -5)) - grad.low).norm() ==
        doctest::Approx(0.0));  // clamped
}

TEST_CASE("raycast: sphere hit distance and misses") {
  SceneSpec spec;
  spec.shapes.push_back(SphereShape{Vec3::Zero(), 1.0});
  const auto hit = raycast(spec, Vec3(0, 0, 5), Vec3(0, 0, -1));
  REQUIRE(hit.has_value());
  CHECK(*hit == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_FALSE(raycast(spec, Vec3(0, 0, 5), Vec3(0, 0, 1)).has_value());
  CHECK_FALSE(raycast(spec, Vec3(0, 3, 5), Vec3(0, 0, -1)).has_value());

  spec.occluders.push_back(BoxShape{Vec3(-1, -1, 2), Vec3(1, 1, 3)});
  const auto blocked = raycast(spec, Vec3(0, 0, 5), Vec3(0, 0, -1));
  REQUIRE(blocked.has_value());
  CHECK(*blocked == doctest::Approx(2.0).epsilon(1e-12));
  const auto ignored = raycast(spec, Vec3(0, 0, 5), Vec3(0, 0, -1), false);
  REQUIRE(ignored.has_value());
  CHECK(*ignored == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("segment_hits_occluder") {
  SceneSpec spec;
  spec.shapes.push_back(SphereShape{Vec3::Zero(), 1.0});
  spec.occluders.push_back(BoxShape{Vec3(-1, -1, 2), Vec3(1, 1, 3)});
  CHECK(segment_hits_occluder(spec, Vec3(0, 0, 5), Vec3(0, 0, 0)));
  CHECK_FALSE(segment_hits_occluder(spec, Vec3(0, 0, 5), Vec3(0, 0, 3.5)));
  CHECK_FALSE(segment_hits_occluder(spec, Vec3(3, 0, 5), Vec3(3, 0, 0)));
  // Shapes themselves are not occluders.
  CHECK_FALSE(segment_hits_occluder(spec, Vec3(0, 3, 0), Vec3(0, -3, 0)));
}

TEST_CASE("render: head-on sphere paints a flat disk of the predicted size") {
  SceneSpec spec;
  spec.shapes.push_back(SphereShape{Vec3::Zero(), 1.0});
  spec.texture = CheckerTexture{0.5, Vec3(0.9, 0.9, 0.9), Vec3(0.3, 0.3, 0.3)};
  spec.explicit_cameras.push_back(
      make_camera(0, Vec3(0, 0, 5), Vec3::Zero(), 100, 120, 120));
  spec.image_width = 120;
  spec.image_height = 120;
  const auto views = render(spec);
  REQUIRE(views.size() == 1);
  const Image& img = views[0].image;

  // Silhouette radius: f * tan(asin(r / d)).
  const double radius = 100.0 * 1.0 / std::sqrt(25.0 - 1.0);
  int lit = 0;
  for (int y = 0; y < 120; ++y) {
    for (int x = 0; x < 120; ++x) {
      const bool nonblack = img.pixel(x, y)[0] > 0.0f;
      const double rr = std::hypot(x - 60.0, y - 60.0);
      if (nonblack) ++lit;
      if (rr < radius - 1.5) CHECK(nonblack);
      if (rr > radius + 1.5) CHECK_FALSE(nonblack);
    }
  }
  const double expected_area = M_PI * radius * radius;
  CHECK(std::abs(lit - expected_area) < 0.1 * expected_area);
}

TEST_CASE("render: deterministic across calls") {
  SceneSpec spec;
  spec.shapes.push_back(SphereShape{Vec3::Zero(), 1.0});
  NoiseTexture noise;
  noise.seed = 9;
  noise.scale = 0.5;
  spec.texture = noise;
  spec.rig = RingRig{4, 4.0, 1.0, Vec3::Zero(), 120.0};
  spec.image_width = 80;
  spec.image_height = 60;
  const auto a = render(spec);
  const auto b = render(spec);
  REQUIRE(a.size() == 4);
  REQUIRE(b.size() == 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].image.data == b[i].image.data);
    CHECK((a[i].rotation - b[i].rotation).norm() == 0.0);
  }
  SceneSpec empty;
  CHECK_THROWS_WITH(render(empty), "invalid-scene");
}

TEST_CASE("ground_truth_cloud: sphere shell within the lattice bound") {
  SceneSpec spec;
  spec.shapes.push_back(SphereShape{Vec3::Zero(), 1.0});
  spec.bbox = Box{Vec3(-1.5, -1.5, -1.5), Vec3(3, 3, 3)};
  const double res = 0.25;
  const SurfacePointCloud cloud = ground_truth_cloud(spec, res);
  REQUIRE_FALSE(cloud.points.empty());
  const double bound = 0.5 * std::sqrt(3.0) * res;
  for (const Vec3& p : cloud.points) {
    CHECK(std::abs(p.norm() - 1.0) <= bound + 1e-12);
    // Lattice alignment: centers sit at bbox.min + res * (i + 1/2).
    for (int a = 0; a < 3; ++a) {
      const double u = (p[a] - spec.bbox->min[a]) / res - 0.5;
      CHECK(std::abs(u - std::round(u)) < 1e-9);
    }
    CHECK(spec.bbox->contains(p));
  }
  // Every lattice voxel within the bound is present (brute-force scan).
  std::size_t expected = 0;
  for (int iz = 0; iz < 12; ++iz) {
    for (int iy = 0; iy < 12; ++iy) {
      for (int ix = 0; ix < 12; ++ix) {
        const Vec3 c =
            spec.bbox->min + res * Vec3(ix + 0.5, iy + 0.5, iz + 0.5);
        if (std::abs(c.norm() - 1.0) <= bound) ++expected;
      }
    }
  }
  CHECK(cloud.points.size() == expected);
  CHECK_THROWS_WITH(ground_truth_cloud(spec, 0.0), "invalid-resolution");
}

TEST_CASE("ground_truth_cloud: centered plane slab is one voxel thick") {
  SceneSpec spec;
  spec.shapes.push_back(PlanePatch{Vec3::Zero(), Vec3(0, 0, 1), 2.0});
  spec.bbox = Box{Vec3(-2.5, -2.5, -2.5), Vec3(5, 5, 5)};
  const SurfacePointCloud cloud = ground_truth_cloud(spec, 1.0);
  REQUIRE_FALSE(cloud.points.empty());
  for (const Vec3& p : cloud.points) {
    CHECK(p.z() == doctest::Approx(0.0));  // single layer at the plane
  }
  CHECK(cloud.points.size() == 25);  // 5 x 5 footprint (patch extent 2 + bound)
}

TEST_CASE("ground_truth_cloud: occluders are excluded") {
  SceneSpec spec;
  spec.shapes.push_back(SphereShape{Vec3::Zero(), 1.0});
  spec.occluders.push_back(BoxShape{Vec3(3, 3, 3), Vec3(4, 4, 4)});
  spec.bbox = Box{Vec3(-5, -5, -5), Vec3(10, 10, 10)};
  const SurfacePointCloud cloud = ground_truth_cloud(spec, 0.5);
  for (const Vec3& p : cloud.points) {
    CHECK(std::abs(p.norm() - 1.0) <= 0.5 * std::sqrt(3.0) * 0.5 + 1e-12);
  }
}

TEST_CASE("ground_truth_volume: matches the surface-distance rule") {
  SceneSpec spec;
  spec.shapes.push_back(SphereShape{Vec3::Zero(), 1.0});
  const SubVolume sv{1, Vec3(-1.0, -1.0, -1.0), 0.25, 8, 0};
  const GroundTruthVolume gt = ground_truth_volume(spec, sv);
  const double bound = 0.5 * std::sqrt(3.0) * 0.25;
  for (int iz = 0; iz < 8; ++iz) {
    for (int iy = 0; iy < 8; ++iy) {
      for (int ix = 0; ix < 8; ++ix) {
        const Vec3 c = sv.voxel_center(ix, iy, iz);
        const bool expect = std::abs(c.norm() - 1.0) <= bound;
        CHECK(static_cast<bool>(gt.occupancy[sv.linear_index(ix, iy, iz)]) ==
              expect);
      }
    }
  }
}

TEST_CASE("render and ground truth agree: GT points project onto lit pixels") {
  SceneSpec spec;
  spec.shapes.push_back(SphereShape{Vec3::Zero(), 1.0});
  spec.texture = CheckerTexture{0.5, Vec3(0.9, 0.9, 0.9), Vec3(0.3, 0.3, 0.3)};
  spec.rig = RingRig{4, 5.0, 0.0, Vec3::Zero(), 200.0};
  spec.image_width = 160;
  spec.image_height = 120;
  spec.bbox = Box{Vec3(-1.5, -1.5, -1.5), Vec3(3, 3, 3)};
  const auto views = render(spec);
  const SurfacePointCloud cloud = ground_truth_cloud(spec, 0.25);
  REQUIRE_FALSE(cloud.points.empty());

  int checked = 0, consistent = 0;
  for (const CameraView& view : views) {
    for (const Vec3& p : cloud.points) {
      // Shell points strictly inside the sphere must land on its silhouette.
      if (p.norm() > 0.98) continue;
      const auto pix = project(view, p);
      if (!pix) continue;
      const int x = static_cast<int>(std::lround(pix->x()));
      const int y = static_cast<int>(std::lround(pix->y()));
      if (x < 0 || y < 0 || x >= 160 || y >= 120) continue;
      ++checked;
      if (view.image.pixel(x, y)[0] > 0.0f) ++consistent;
    }
  }
  REQUIRE(checked > 0);
  CHECK(consistent >= static_cast<int>(0.95 * checked));
}
