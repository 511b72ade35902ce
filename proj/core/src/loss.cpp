#include "voxmvs/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace voxmvs {

double occupancy_ratio(const std::vector<GroundTruthVolume>& gt) {
  if (gt.empty()) {
    throw std::runtime_error("empty-ground-truth");
  }
  std::size_t occupied = 0, total = 0;
  for (const auto& volume : gt) {
    for (uint8_t v : volume.occupancy) occupied += v ? 1 : 0;
    total += volume.occupancy.size();
  }
  return total == 0 ? 0.0 : static_cast<double>(occupied) / total;
}

double non_surface_ratio(const std::vector<GroundTruthVolume>& gt) {
  return 1.0 - occupancy_ratio(gt);
}

double balanced_cross_entropy(const ProbabilityVolume& pred,
                              const GroundTruthVolume& gt, double beta) {
  if (pred.probs.size() != gt.occupancy.size()) {
    throw std::runtime_error("shape-mismatch");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::runtime_error("invalid-beta");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < pred.probs.size(); ++i) {
    const double p = pred.probs[i];
    if (gt.occupancy[i]) {
      loss -= beta * std::log(p);
    } else {
      loss -= (1.0 - beta) * std::log(1.0 - p);
    }
  }
  return loss;
}

double refine_mse(const ProbabilityVolume& pred, const GroundTruthVolume& gt) {
  if (pred.probs.size() != gt.occupancy.size()) {
    throw std::runtime_error("shape-mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.probs.size(); ++i) {
    const double d = (gt.occupancy[i] ? 1.0 : 0.0) - pred.probs[i];
    sum += d * d;
  }
  return sum;
}

double total_loss(double l_init, double l_refine) {
  if (!std::isfinite(l_init) || !std::isfinite(l_refine)) {
    throw std::runtime_error("non-finite-loss");
  }
  return l_init + l_refine;
}

}  // namespace voxmvs
