#include "alphaiou/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "alphaiou/rng.hpp"

namespace alphaiou {

NoiseConfig::NoiseConfig(double eta_, std::uint64_t seed_) : eta(eta_), seed(seed_) {
  if (!std::isfinite(eta) || eta < 0.0 || eta > kMaxNoiseRate) {
    throw std::invalid_argument("NoiseConfig: eta must lie in [0, 0.5]");
  }
}

Box perturb(const Box& box, const NoiseConfig& cfg, const std::array<double, 4>& draws) {
  for (double u : draws) {
    if (!(u >= -1.0) || !(u <= 1.0)) {
      throw std::invalid_argument("perturb: draws must lie in [-1, 1]");
    }
  }
  const double cx = box.cx + draws[0] * cfg.eta * box.w;
  const double w = box.w + draws[1] * cfg.eta * box.w;
  const double cy = box.cy + draws[2] * cfg.eta * box.h;
  const double h = box.h + draws[3] * cfg.eta * box.h;
  // eta <= 0.5 keeps the extents positive; projection restores feasibility
  return clamp_to_bounds(Box(cx, cy, std::max(w, kMinExtent), std::max(h, kMinExtent)));
}

DegradeResult degrade_dataset(const std::vector<GroundTruth>& gts, const NoiseConfig& cfg) {
  if (gts.empty()) throw std::invalid_argument("degrade_dataset: empty annotation list");

  std::mt19937_64 rng(cfg.seed);
  DegradeResult out;
  out.noisy.reserve(gts.size());
  double iou_total = 0.0;
  for (const GroundTruth& g : gts) {
    const std::array<double, 4> draws = {uniform_pm1(rng), uniform_pm1(rng), uniform_pm1(rng),
                                         uniform_pm1(rng)};
    const Box noisy_box = perturb(g.box, cfg, draws);
    iou_total += iou(noisy_box, g.box);
    out.noisy.push_back({g.image_id, g.category, noisy_box});
  }
  out.mean_iou = iou_total / static_cast<double>(gts.size());
  return out;
}

}  // namespace alphaiou
