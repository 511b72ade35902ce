#include <benchmark/benchmark.h>

#include <random>

#include "voxmvs/evaluation.hpp"
#include "voxmvs/fusion.hpp"
#include "voxmvs/geometry.hpp"
#include "voxmvs/predictor.hpp"

namespace {

using namespace voxmvs;

std::vector<Vec3> random_points(std::size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Vec3> pts(n);
  for (auto& p : pts) p = Vec3(dist(rng), dist(rng), dist(rng));
  return pts;
}

ColoredVoxelCube random_cvc(int s, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(0.0f, 1.0f);
  ColoredVoxelCube cvc;
  cvc.subvolume = {1, Vec3::Zero(), 0.1, s, 0};
  cvc.view_id = static_cast<int>(seed);
  cvc.colors.resize(3u * s * s * s);
  for (auto& c : cvc.colors) c = dist(rng);
  cvc.validity.assign(static_cast<std::size_t>(s) * s * s, 1);
  return cvc;
}

void bm_convex_hull9(benchmark::State& state) {
  const std::vector<Vec3> pts = random_points(9, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(convex_hull(pts));
  }
}
BENCHMARK(bm_convex_hull9);

void bm_predict_photo_consistency(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  const ColoredVoxelCube a = random_cvc(s, 1);
  const ColoredVoxelCube b = random_cvc(s, 2);
  PredictorConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_photo_consistency(a, b, config));
  }
  state.SetItemsProcessed(state.iterations() * s * s * s);
}
BENCHMARK(bm_predict_photo_consistency)->Arg(16)->Arg(32);

void bm_fuse_weighted(benchmark::State& state) {
  const int s = 16;
  PredictorConfig config;
  std::vector<ProbabilityVolume> volumes;
  for (int i = 0; i < 4; ++i) {
    volumes.push_back(
        predict_photo_consistency(random_cvc(s, i), random_cvc(s, i + 10), config));
  }
  std::vector<const ProbabilityVolume*> ptrs;
  for (const auto& v : volumes) ptrs.push_back(&v);
  const std::vector<double> weights = {1.0, 0.5, 0.25, 0.125};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fuse_weighted(weights, ptrs));
  }
}
BENCHMARK(bm_fuse_weighted);

void bm_nearest_neighbor_query(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 11);
  const NearestNeighborGrid grid(pts);
  const auto queries = random_points(1024, 13);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid.nearest_distance(queries[i++ & 1023]));
  }
}
BENCHMARK(bm_nearest_neighbor_query)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
