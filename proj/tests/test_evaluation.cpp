#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Geometry>

#include "test_support.hpp"
#include "voxmvs/evaluation.hpp"

using namespace voxmvs;
using testsupport::brute_nearest_distance;
using testsupport::make_camera;
using testsupport::random_vec3;

namespace {

SurfacePointCloud cloud_of(std::vector<Vec3> points) {
  SurfacePointCloud c;
  c.level = 1;
  c.points = std::move(points);
  c.resolution = 1.0;
  return c;
}

SurfacePointCloud random_cloud(std::mt19937_64& rng, int n, double lo, double hi) {
  SurfacePointCloud c;
  c.level = 1;
  c.resolution = 1.0;
  for (int i = 0; i < n; ++i) c.points.push_back(random_vec3(rng, lo, hi));
  return c;
}

}  // namespace

TEST_CASE("NearestNeighborGrid: exact against the brute-force oracle") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 400);
    std::vector<Vec3> points;
    for (int i = 0; i < n; ++i) points.push_back(random_vec3(rng, -5.0, 5.0));
    NearestNeighborGrid grid(points);
    for (int q = 0; q < 50; ++q) {
      const Vec3 query = random_vec3(rng, -8.0, 8.0);
      CHECK(grid.nearest_distance(query) ==
            doctest::Approx(brute_nearest_distance(points, query)).epsilon(1e-12));
    }
  }
}

TEST_CASE("accuracy and completeness: identical clouds give (0, 0)") {
  std::mt19937_64 rng(107);
  const SurfacePointCloud c = random_cloud(rng, 100, -2.0, 2.0);
  const auto acc = accuracy(c, c);
  const auto comp = completeness(c, c);
  CHECK(acc.first == 0.0);
  CHECK(acc.second == 0.0);
  CHECK(comp.first == 0.0);
  CHECK(comp.second == 0.0);
  CHECK(f_score(c, c, 0.5).f == 100.0);
}

TEST_CASE("accuracy/completeness: brute-force agreement and asymmetry") {
  std::mt19937_64 rng(109);
  const SurfacePointCloud pred = random_cloud(rng, 230, -3.0, 3.0);
  const SurfacePointCloud ref = random_cloud(rng, 170, -3.0, 3.0);

  std::vector<double> d_pred, d_ref;
  for (const Vec3& p : pred.points) {
    d_pred.push_back(brute_nearest_distance(ref.points, p));
  }
  for (const Vec3& p : ref.points) {
    d_ref.push_back(brute_nearest_distance(pred.points, p));
  }
  auto stats = [](std::vector<double> d) {
    std::sort(d.begin(), d.end());
    double sum = 0.0;
    for (double v : d) sum += v;
    const std::size_t n = d.size();
    const double med = n % 2 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
    return std::pair<double, double>{sum / n, med};
  };
  const auto acc_expect = stats(d_pred);
  const auto comp_expect = stats(d_ref);
  const auto acc = accuracy(pred, ref);
  const auto comp = completeness(pred, ref);
  CHECK(acc.first == doctest::Approx(acc_expect.first).epsilon(1e-12));
  CHECK(acc.second == doctest::Approx(acc_expect.second).epsilon(1e-12));
  CHECK(comp.first == doctest::Approx(comp_expect.first).epsilon(1e-12));
  CHECK(comp.second == doctest::Approx(comp_expect.second).epsilon(1e-12));

  CHECK_THROWS_WITH(accuracy(cloud_of({}), ref), "empty-cloud");
  CHECK_THROWS_WITH(completeness(pred, cloud_of({})), "empty-cloud");
}

TEST_CASE("f_score: half precision, full recall gives 66.67") {
  const SurfacePointCloud ref = cloud_of({Vec3(0, 0, 0), Vec3(1, 0, 0)});
  const SurfacePointCloud pred = cloud_of(
      {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(50, 0, 0), Vec3(60, 0, 0)});
  const PercentageMetric m = f_score(pred, ref, 0.5);
  CHECK(m.precision_pct == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(m.recall_pct == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(m.f == doctest::Approx(200.0 / 3.0).epsilon(1e-9));
  CHECK_THROWS_WITH(f_score(pred, ref, 0.0), "invalid-threshold");
}

TEST_CASE("f_score: brute-force agreement on random clouds") {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 5; ++trial) {
    const SurfacePointCloud pred = random_cloud(rng, 150, -2.0, 2.0);
    const SurfacePointCloud ref = random_cloud(rng, 120, -2.0, 2.0);
    const double thr = 0.2 + 0.1 * trial;
    std::size_t p_hits = 0, r_hits = 0;
    for (const Vec3& p : pred.points) {
      if (brute_nearest_distance(ref.points, p) <= thr) ++p_hits;
    }
    for (const Vec3& p : ref.points) {
      if (brute_nearest_distance(pred.points, p) <= thr) ++r_hits;
    }
    const PercentageMetric m = f_score(pred, ref, thr);
    CHECK(m.precision_pct ==
          doctest::Approx(100.0 * p_hits / pred.points.size()).epsilon(1e-12));
    CHECK(m.recall_pct ==
          doctest::Approx(100.0 * r_hits / ref.points.size()).epsilon(1e-12));
  }
}

TEST_CASE("evaluate_clouds: rigid-transform invariance") {
  std::mt19937_64 rng(127);
  SurfacePointCloud pred = random_cloud(rng, 200, -2.0, 2.0);
  SurfacePointCloud ref = random_cloud(rng, 180, -2.0, 2.0);
  const EvalReport base = evaluate_clouds(pred, ref, 0.4);

  const Eigen::AngleAxisd rot(0.83, Vec3(1, 2, 3).normalized());
  const Vec3 shift(5.0, -3.0, 2.5);
  SurfacePointCloud pred2 = pred, ref2 = ref;
  for (Vec3& p : pred2.points) p = rot * p + shift;
  for (Vec3& p : ref2.points) p = rot * p + shift;
  const EvalReport moved = evaluate_clouds(pred2, ref2, 0.4);

  CHECK(std::abs(moved.mean_accuracy - base.mean_accuracy) < 1e-9);
  CHECK(std::abs(moved.median_accuracy - base.median_accuracy) < 1e-9);
  CHECK(std::abs(moved.mean_completeness - base.mean_completeness) < 1e-9);
  CHECK(std::abs(moved.median_completeness - base.median_completeness) < 1e-9);
  CHECK(moved.precision_pct == base.precision_pct);
  CHECK(moved.recall_pct == base.recall_pct);
  CHECK(std::abs(moved.f_score - base.f_score) < 1e-9);
  CHECK(std::abs(moved.overall_distance - base.overall_distance) < 1e-9);
}

TEST_CASE("sparsity_sample: worked examples") {
  const std::vector<int> ids{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  CHECK(sparsity_sample(ids, 3, 1) == std::vector<int>{1, 4, 7, 10});
  CHECK(sparsity_sample(ids, 3, 2) == std::vector<int>{1, 2, 4, 5, 7, 8, 10, 11});
  CHECK(sparsity_sample(ids, 1, 1) == ids);
  CHECK(sparsity_sample(ids, 5, 2) == std::vector<int>{1, 2, 6, 7, 11, 12});
  CHECK_THROWS_WITH(sparsity_sample(ids, 0, 1), "invalid-sparsity");
  CHECK_THROWS_WITH(sparsity_sample(ids, 2, 3), "invalid-sparsity");
}

TEST_CASE("mean_baseline_angle: symmetric two-camera example") {
  const SurfacePointCloud ref = cloud_of({Vec3::Zero()});
  const std::vector<CameraView> views{
      make_camera(0, Vec3(1, 0, 0), Vec3::Zero(), 100, 32, 32),
      make_camera(1, Vec3(0, 1, 0), Vec3::Zero(), 100, 32, 32)};
  CHECK(mean_baseline_angle(ref, views) ==
        doctest::Approx(std::acos(-1.0) / 2.0).epsilon(1e-12));
  CHECK_THROWS_WITH(mean_baseline_angle(ref, {views[0]}), "insufficient-views");
}

TEST_CASE("speedup_ratio: ledger example") {
  CubeCountLedger ledger;
  ledger.dense_baseline = 100;
  ledger.record(1, 8, 8);
  ledger.record(2, 16, 12);
  CHECK(speedup_ratio(ledger) == doctest::Approx(5.0).epsilon(1e-12));
  CubeCountLedger bad;
  CHECK_THROWS_WITH(speedup_ratio(bad), "invalid-ledger");
}
