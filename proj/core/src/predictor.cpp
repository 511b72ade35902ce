#include "voxmvs/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace voxmvs {

Image gaussian_blur(const Image& image, double sigma) {
  if (sigma < 0.0) {
    throw std::runtime_error("invalid-sigma");
  }
  if (sigma == 0.0 || image.empty()) {
    return image;
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;

  const int w = image.width, h = image.height;
  Image tmp = image;
  // horizontal
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0, 0, 0};
      for (int i = -radius; i <= radius; ++i) {
        const int xi = std::clamp(x + i, 0, w - 1);
        const float* px = image.pixel(xi, y);
        for (int c = 0; c < 3; ++c) acc[c] += kernel[i + radius] * px[c];
      }
      float* out = tmp.pixel(x, y);
      for (int c = 0; c < 3; ++c) out[c] = static_cast<float>(acc[c]);
    }
  }
  // vertical
  Image result = tmp;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0, 0, 0};
      for (int i = -radius; i <= radius; ++i) {
        const int yi = std::clamp(y + i, 0, h - 1);
        const float* px = tmp.pixel(x, yi);
        for (int c = 0; c < 3; ++c) acc[c] += kernel[i + radius] * px[c];
      }
      float* out = result.pixel(x, y);
      for (int c = 0; c < 3; ++c) out[c] = static_cast<float>(acc[c]);
    }
  }
  return result;
}

ProbabilityVolume predict_photo_consistency(const ColoredVoxelCube& cvc_i,
                                            const ColoredVoxelCube& cvc_j,
                                            const PredictorConfig& config) {
  if (!cvc_i.subvolume.same_grid(cvc_j.subvolume)) {
    throw std::runtime_error("cvc-mismatch");
  }
  if (config.window_radius < 0 || !(config.sigma_color > 0.0)) {
    throw std::runtime_error("invalid-predictor-config");
  }
  const SubVolume& sv = cvc_i.subvolume;
  const int s = sv.side_voxels;
  const int w = config.window_radius;
  const double inv_two_sigma2 = 1.0 / (2.0 * config.sigma_color * config.sigma_color);

  ProbabilityVolume vol;
  vol.subvolume = sv;
  vol.probs.assign(sv.voxel_count(), kProbFloor);

  for (int iz = 0; iz < s; ++iz) {
    for (int iy = 0; iy < s; ++iy) {
      for (int ix = 0; ix < s; ++ix) {
        const std::size_t idx = sv.linear_index(ix, iy, iz);
        if (!cvc_i.validity[idx] || !cvc_j.validity[idx]) {
          continue;  // probability floor
        }
        double sq_sum = 0.0;
        int count = 0;
        for (int dz = -w; dz <= w; ++dz) {
          const int nz = iz + dz;
          if (nz < 0 || nz >= s) continue;
          for (int dy = -w; dy <= w; ++dy) {
            const int ny = iy + dy;
            if (ny < 0 || ny >= s) continue;
            for (int dx = -w; dx <= w; ++dx) {
              const int nx = ix + dx;
              if (nx < 0 || nx >= s) continue;
              const std::size_t nidx = sv.linear_index(nx, ny, nz);
              if (!cvc_i.validity[nidx] || !cvc_j.validity[nidx]) continue;
              const float* a = cvc_i.color(nidx);
              const float* b = cvc_j.color(nidx);
              for (int c = 0; c < 3; ++c) {
                const double d = static_cast<double>(a[c]) - b[c];
                sq_sum += d * d;
              }
              ++count;
            }
          }
        }
        const double d2 = count > 0 ? sq_sum / (3.0 * count) : 0.0;
        const double p = std::exp(-d2 * inv_two_sigma2);
        vol.probs[idx] = std::clamp(p, kProbFloor, kProbCeil);
      }
    }
  }
  return vol;
}

namespace {
std::map<std::string, PredictorFunction>& predictor_registry() {
  static std::map<std::string, PredictorFunction> registry = {
      {"photo-consistency", predict_photo_consistency}};
  return registry;
}
std::mutex predictor_mutex;
}  // namespace

void register_predictor(const std::string& name, PredictorFunction fn) {
  std::lock_guard<std::mutex> lock(predictor_mutex);
  predictor_registry()[name] = std::move(fn);
}

PredictorFunction predictor_by_name(const std::string& name) {
  std::lock_guard<std::mutex> lock(predictor_mutex);
  auto it = predictor_registry().find(name);
  if (it == predictor_registry().end()) {
    throw std::runtime_error("unknown-predictor");
  }
  return it->second;
}

}  // namespace voxmvs
