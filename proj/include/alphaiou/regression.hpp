#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "alphaiou/losses.hpp"

namespace alphaiou {

inline constexpr double kConvergedIoU = 0.99;
inline constexpr double kDefaultLearningRate = 0.01;
inline constexpr int kDefaultSteps = 2000;

struct TrajectoryPoint {
  int step;
  double iou;
  double loss;
  double grad_norm;
};

struct RegressionRun {
  LossSpec spec;
  double lr;
  int steps;
  std::vector<TrajectoryPoint> trajectory;  // steps + 1 entries, initial state first
  std::vector<Box> boxes;                   // box state per trajectory entry
  std::optional<int> converged_at;          // first step with iou >= kConvergedIoU
  int clamp_events;                         // times an extent had to be floored
};

/// Plain fixed-step gradient descent on the predicted box, projecting back
/// into the unit square after every step. Deterministic.
RegressionRun regress(const LossSpec& spec, const Box& init, const Box& gt,
                      double lr = kDefaultLearningRate, int steps = kDefaultSteps);

/// One run per alpha, all with the same kind (alpha applied to both terms).
std::vector<RegressionRun> compare_alphas(LossKind kind, const std::vector<double>& alphas,
                                          const Box& init, const Box& gt,
                                          double lr = kDefaultLearningRate,
                                          int steps = kDefaultSteps);

/// First step index at which the run's IoU reaches the threshold.
std::optional<int> steps_to_reach(const RegressionRun& run, double iou_threshold);

/// CSV with header step,alpha,iou,loss,grad_norm; runs are concatenated.
void write_trajectories_csv(std::ostream& os, const std::vector<RegressionRun>& runs);

}  // namespace alphaiou
