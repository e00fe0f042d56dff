#include "alphaiou/regression.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace alphaiou {

RegressionRun regress(const LossSpec& spec, const Box& init, const Box& gt, double lr,
                      int steps) {
  if (!(lr > 0.0)) throw std::invalid_argument("regress: lr must be positive");
  if (steps < 0) throw std::invalid_argument("regress: steps must be >= 0");

  RegressionRun run{spec, lr, steps, {}, {}, std::nullopt, 0};
  run.trajectory.reserve(steps + 1);
  run.boxes.reserve(steps + 1);

  Box cur = init;
  for (int k = 0; k <= steps; ++k) {
    const LossEval e = loss_eval(spec, cur, gt);
    const double cur_iou = iou(cur, gt);
    double norm_sq = 0.0;
    for (double g : e.grad_pred) norm_sq += g * g;
    run.trajectory.push_back({k, cur_iou, e.value, std::sqrt(norm_sq)});
    run.boxes.push_back(cur);
    if (!run.converged_at && cur_iou >= kConvergedIoU) run.converged_at = k;
    if (k == steps) break;

    double cx = cur.cx - lr * e.grad_pred[0];
    double cy = cur.cy - lr * e.grad_pred[1];
    double w = cur.w - lr * e.grad_pred[2];
    double h = cur.h - lr * e.grad_pred[3];
    if (w < kMinExtent) {
      w = kMinExtent;
      ++run.clamp_events;
    }
    if (h < kMinExtent) {
      h = kMinExtent;
      ++run.clamp_events;
    }
    cur = clamp_to_bounds(Box(cx, cy, w, h));
  }
  return run;
}

std::vector<RegressionRun> compare_alphas(LossKind kind, const std::vector<double>& alphas,
                                          const Box& init, const Box& gt, double lr, int steps) {
  if (alphas.empty()) throw std::invalid_argument("compare_alphas: no alphas given");
  std::vector<RegressionRun> runs;
  runs.reserve(alphas.size());
  for (double a : alphas) {
    const LossSpec spec = kind == LossKind::LogIoU ? LossSpec(kind) : LossSpec(kind, a);
    runs.push_back(regress(spec, init, gt, lr, steps));
  }
  return runs;
}

std::optional<int> steps_to_reach(const RegressionRun& run, double iou_threshold) {
  for (const TrajectoryPoint& p : run.trajectory) {
    if (p.iou >= iou_threshold) return p.step;
  }
  return std::nullopt;
}

void write_trajectories_csv(std::ostream& os, const std::vector<RegressionRun>& runs) {
  os << "step,alpha,iou,loss,grad_norm\n";
  os << std::setprecision(12);
  for (const RegressionRun& run : runs) {
    for (const TrajectoryPoint& p : run.trajectory) {
      os << p.step << ',' << run.spec.alpha1 << ',' << p.iou << ',' << p.loss << ','
         << p.grad_norm << '\n';
    }
  }
}

}  // namespace alphaiou
