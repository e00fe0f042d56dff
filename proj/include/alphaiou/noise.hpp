#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "alphaiou/eval.hpp"
#include "alphaiou/geometry.hpp"

namespace alphaiou {

// Largest supported noise rate: offsets are drawn within half a box extent.
inline constexpr double kMaxNoiseRate = 0.5;

struct NoiseConfig {
  double eta;          // noise rate in [0, kMaxNoiseRate]
  std::uint64_t seed;

  explicit NoiseConfig(double eta_, std::uint64_t seed_ = 0);
};

/// Applies one noise draw to a box: each of (cx, w, cy, h) moves by
/// u * eta * extent, where u is the matching entry of draws (expected in
/// [-1, 1]) and extent is the box width for the x components and the height
/// for the y components. The result is projected back into the unit square.
/// draws order: (cx, w, cy, h).
Box perturb(const Box& box, const NoiseConfig& cfg, const std::array<double, 4>& draws);

struct DegradeResult {
  std::vector<GroundTruth> noisy;  // same order, ids and categories preserved
  double mean_iou;                 // mean IoU between noisy and clean boxes
};

/// Perturbs every annotation with independent uniform draws from an
/// mt19937_64 stream seeded with cfg.seed, consumed in annotation order
/// (four draws per box, in the perturb order above). Deterministic.
DegradeResult degrade_dataset(const std::vector<GroundTruth>& gts, const NoiseConfig& cfg);

}  // namespace alphaiou
