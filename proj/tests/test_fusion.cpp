#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "test_support.hpp"
#include "voxmvs/fusion.hpp"

using namespace voxmvs;
using testsupport::make_camera;

namespace {

const SubVolume kCube{1, Vec3(-0.5, -0.5, -0.5), 0.25, 4, 0};

ProbabilityVolume random_volume(std::mt19937_64& rng, const SubVolume& sv) {
  std::uniform_real_distribution<double> d(kProbFloor, kProbCeil);
  ProbabilityVolume vol = ProbabilityVolume::filled(sv, 0.0);
  for (double& p : vol.probs) p = d(rng);
  return vol;
}

}  // namespace

TEST_CASE("fuse_weighted: equal weights average") {
  const ProbabilityVolume a = ProbabilityVolume::filled(kCube, 0.25);
  const ProbabilityVolume b = ProbabilityVolume::filled(kCube, 0.75);
  const ProbabilityVolume out = fuse_weighted({1.0, 1.0}, {&a, &b});
  for (double p : out.probs) CHECK(p == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fuse_weighted: weight 1:3 of 0.6 and 0.8 gives 0.75") {
  const ProbabilityVolume a = ProbabilityVolume::filled(kCube, 0.6);
  const ProbabilityVolume b = ProbabilityVolume::filled(kCube, 0.8);
  const ProbabilityVolume out = fuse_weighted({1.0, 3.0}, {&a, &b});
  for (double p : out.probs) CHECK(p == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("fuse_weighted: single volume is the identity") {
  std::mt19937_64 rng(83);
  const ProbabilityVolume a = random_volume(rng, kCube);
  const ProbabilityVolume out = fuse_weighted({0.37}, {&a});
  CHECK(out.probs == a.probs);
}

TEST_CASE("fuse_weighted: errors") {
  const ProbabilityVolume a = ProbabilityVolume::filled(kCube, 0.5);
  const SubVolume other{1, Vec3::Zero(), 0.5, 4, 0};
  const ProbabilityVolume b = ProbabilityVolume::filled(other, 0.5);
  CHECK_THROWS_WITH(fuse_weighted({1.0, 1.0}, {&a, &b}), "cvc-mismatch");
  CHECK_THROWS_WITH(fuse_weighted({}, {}), "cvc-mismatch");
  CHECK_THROWS_WITH(fuse_weighted({0.0, 0.0}, {&a, &a}), "zero-weight");
  CHECK_THROWS_WITH(fuse_weighted({1.0, -0.5}, {&a, &a}), "zero-weight");
}

TEST_CASE("fuse_weighted: bounds, rescale and permutation invariance") {
  std::mt19937_64 rng(89);
  std::uniform_real_distribution<double> wd(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ProbabilityVolume> vols;
    std::vector<const ProbabilityVolume*> ptrs;
    std::vector<double> weights;
    const int n = 2 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) vols.push_back(random_volume(rng, kCube));
    for (int i = 0; i < n; ++i) ptrs.push_back(&vols[i]);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      weights.push_back(wd(rng));
      total += weights.back();
    }
    if (!(total > 0.0)) continue;
    const ProbabilityVolume out = fuse_weighted(weights, ptrs);

    double lo = 1.0, hi = 0.0;
    for (const auto& v : vols) {
      lo = std::min(lo, *std::min_element(v.probs.begin(), v.probs.end()));
      hi = std::max(hi, *std::max_element(v.probs.begin(), v.probs.end()));
    }
    for (double p : out.probs) {
      CHECK(p >= lo - 1e-12);
      CHECK(p <= hi + 1e-12);
    }

    std::vector<double> scaled = weights;
    for (double& w : scaled) w *= 4.0;  // exact in binary floating point
    const ProbabilityVolume rescaled = fuse_weighted(scaled, ptrs);
    for (std::size_t i = 0; i < out.probs.size(); ++i) {
      CHECK(std::abs(rescaled.probs[i] - out.probs[i]) < 1e-12);
    }

    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> pw(n);
    std::vector<const ProbabilityVolume*> pp(n);
    for (int i = 0; i < n; ++i) {
      pw[i] = weights[perm[i]];
      pp[i] = ptrs[perm[i]];
    }
    const ProbabilityVolume permuted = fuse_weighted(pw, pp);
    for (std::size_t i = 0; i < out.probs.size(); ++i) {
      CHECK(std::abs(permuted.probs[i] - out.probs[i]) < 1e-12);
    }
  }
}

TEST_CASE("fuse: uses the pair weights") {
  ViewPairScore s1;
  s1.weight = 1.0;
  ViewPairScore s2;
  s2.weight = 3.0;
  std::vector<std::pair<ViewPairScore, ProbabilityVolume>> preds;
  preds.emplace_back(s1, ProbabilityVolume::filled(kCube, 0.6));
  preds.emplace_back(s2, ProbabilityVolume::filled(kCube, 0.8));
  const ProbabilityVolume out = fuse(preds);
  for (double p : out.probs) CHECK(p == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("threshold_binarize: strictly above tau") {
  ProbabilityVolume vol = ProbabilityVolume::filled(kCube, 0.7);
  vol.probs[0] = 0.7 + 1e-9;
  vol.probs[1] = 0.7 - 1e-9;
  const OccupancyGrid grid = threshold_binarize(vol, 0.7);
  CHECK(grid.occupied[0] == 1);
  CHECK(grid.occupied[1] == 0);
  CHECK(grid.occupied[2] == 0);  // exactly tau is out
  CHECK_THROWS_WITH(threshold_binarize(vol, 0.0), "invalid-tau");
  CHECK_THROWS_WITH(threshold_binarize(vol, 1.0), "invalid-tau");
}

TEST_CASE("ray_pool: only the per-ray maximum survives") {
  // A distant axial camera collapses each z-column onto one pixel.
  const CameraView view =
      make_camera(0, Vec3(0, 0, 1000), Vec3::Zero(), 8000, 64, 64);
  ProbabilityVolume vol = ProbabilityVolume::filled(kCube, kProbFloor);
  // Column (0, 0): probabilities 0.1, 0.9, 0.3 along z.
  vol.probs[kCube.linear_index(0, 0, 0)] = 0.1;
  vol.probs[kCube.linear_index(0, 0, 1)] = 0.9;
  vol.probs[kCube.linear_index(0, 0, 2)] = 0.3;
  OccupancyGrid occ = OccupancyGrid::empty(kCube);
  occ.occupied[kCube.linear_index(0, 0, 0)] = 1;
  occ.occupied[kCube.linear_index(0, 0, 1)] = 1;
  occ.occupied[kCube.linear_index(0, 0, 2)] = 1;

  const OccupancyGrid pooled = ray_pool_multi(vol, occ, {&view}, 0.05);
  CHECK(pooled.occupied[kCube.linear_index(0, 0, 0)] == 0);
  CHECK(pooled.occupied[kCube.linear_index(0, 0, 1)] == 1);
  CHECK(pooled.occupied[kCube.linear_index(0, 0, 2)] == 0);
  int total = 0;
  for (uint8_t o : pooled.occupied) total += o;
  CHECK(total == 1);
}

TEST_CASE("ray_pool_multi: matches a brute-force oracle on random volumes") {
  std::mt19937_64 rng(97);
  const CameraView va =
      make_camera(0, Vec3(0, 0, 1000), Vec3::Zero(), 8000, 64, 64);
  const CameraView vb =
      make_camera(1, Vec3(1000, 0, 0), Vec3::Zero(), 8000, 64, 64);
  const std::vector<const CameraView*> views{&va, &vb};

  for (int trial = 0; trial < 10; ++trial) {
    const ProbabilityVolume vol = random_volume(rng, kCube);
    OccupancyGrid occ = OccupancyGrid::empty(kCube);
    for (auto& o : occ.occupied) o = rng() % 2;
    const double tau = 0.3;
    const OccupancyGrid pooled = ray_pool_multi(vol, occ, views, tau);

    // Oracle: per view, group voxels by rounded pixel; a voxel survives iff
    // occupied, above tau, and it is the strict-or-first argmax everywhere.
    const int s = kCube.side_voxels;
    std::vector<int> wins(kCube.voxel_count(), 0);
    std::vector<int> seen(kCube.voxel_count(), 0);
    for (const CameraView* view : views) {
      std::map<std::pair<long, long>, std::vector<std::size_t>> groups;
      for (int iz = 0; iz < s; ++iz) {
        for (int iy = 0; iy < s; ++iy) {
          for (int ix = 0; ix < s; ++ix) {
            const auto pix = project(*view, kCube.voxel_center(ix, iy, iz));
            if (!pix) continue;
            const long u = std::lround(pix->x());
            const long v = std::lround(pix->y());
            if (u < 0 || v < 0 || u >= 64 || v >= 64) continue;
            groups[{u, v}].push_back(kCube.linear_index(ix, iy, iz));
          }
        }
      }
      for (const auto& [pixel, members] : groups) {
        std::size_t best = members.front();
        for (std::size_t idx : members) {
          ++seen[idx];
          if (vol.probs[idx] > vol.probs[best]) best = idx;
        }
        ++wins[best];
      }
    }
    int survivors = 0;
    for (std::size_t i = 0; i < kCube.voxel_count(); ++i) {
      const bool expect = occ.occupied[i] && vol.probs[i] > tau && wins[i] == seen[i];
      CHECK(static_cast<bool>(pooled.occupied[i]) == expect);
      // Pooling only removes voxels.
      if (pooled.occupied[i]) {
        CHECK(occ.occupied[i] == 1);
        CHECK(vol.probs[i] > tau);
        ++survivors;
      }
    }
    (void)survivors;
  }
}

TEST_CASE("ray_pool: mismatched grids throw") {
  const ProbabilityVolume vol = ProbabilityVolume::filled(kCube, 0.5);
  const SubVolume other{1, Vec3::Zero(), 0.5, 4, 0};
  const OccupancyGrid occ = OccupancyGrid::empty(other);
  const CameraView view =
      make_camera(0, Vec3(0, 0, 1000), Vec3::Zero(), 8000, 64, 64);
  CHECK_THROWS_WITH(ray_pool_multi(vol, occ, {&view}, 0.5), "cvc-mismatch");
}
