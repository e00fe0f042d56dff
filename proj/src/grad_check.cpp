#include "alphaiou/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include <json.hpp>

#include "alphaiou/rng.hpp"

namespace alphaiou {

namespace {

// Objective value recomputed from the geometry summary alone. For AlphaCIoU
// the coupling coefficient is pinned to beta0 so the difference quotient
// targets the same function the analytic gradient differentiates.
double objective(const LossSpec& spec, const Box& pred, const Box& gt, double beta0) {
  const GeometrySummary s = summarize(pred, gt);
  if (spec.kind == LossKind::LogIoU) return -std::log(std::max(s.iou, kLogIoUFloor));
  double val = 1.0 - std::pow(s.iou, spec.alpha1);
  switch (spec.kind) {
    case LossKind::AlphaGIoU:
      if (s.enclosure_excess > 0.0) val += std::pow(s.enclosure_excess, spec.alpha2);
      break;
    case LossKind::AlphaDIoU:
    case LossKind::AlphaCIoU: {
      const double ratio = s.diag_sq > 0.0 ? s.center_dist_sq / s.diag_sq : 0.0;
      if (ratio > 0.0) val += std::pow(ratio, spec.alpha2);
      if (spec.kind == LossKind::AlphaCIoU) {
        const double bv = beta0 * s.v;
        if (bv > 0.0) val += std::pow(bv, spec.alpha2);
      }
      break;
    }
    default:
      break;
  }
  return val;
}

double coupling_beta(const Box& pred, const Box& gt) {
  const GeometrySummary s = summarize(pred, gt);
  const double denom = (1.0 - s.iou) + s.v;
  return denom > 0.0 ? s.v / denom : 0.0;
}

Box nudged(const Box& b, int comp, double delta) {
  double p[4] = {b.cx, b.cy, b.w, b.h};
  p[comp] += delta;
  return Box(p[0], p[1], p[2], p[3]);
}

bool step_ok(const Box& b, int comp, double step) {
  if (comp < 2) return true;
  const double extent = comp == 2 ? b.w : b.h;
  return extent - step >= kMinExtent;
}

}  // namespace

std::array<double, 4> fd_gradient(const LossSpec& spec, const Box& pred, const Box& gt,
                                  double step) {
  if (!(step > 0.0)) throw std::invalid_argument("fd_gradient: step must be positive");
  const double beta0 = spec.kind == LossKind::AlphaCIoU ? coupling_beta(pred, gt) : 0.0;
  std::array<double, 4> grad{};
  for (int j = 0; j < 4; ++j) {
    double s = step;
    if (!step_ok(pred, j, s)) s = step / 10.0;
    if (!step_ok(pred, j, s)) {
      throw std::domain_error("fd_gradient: perturbation would degenerate the box");
    }
    const double hi = objective(spec, nudged(pred, j, +s), gt, beta0);
    const double lo = objective(spec, nudged(pred, j, -s), gt, beta0);
    grad[j] = (hi - lo) / (2.0 * s);
  }
  return grad;
}

GradReport sweep_check(int n_random, std::uint64_t seed) {
  if (n_random < 1) throw std::invalid_argument("sweep_check: n_random must be >= 1");
  std::mt19937_64 rng(seed);
  constexpr LossKind kKinds[] = {LossKind::AlphaIoU, LossKind::AlphaGIoU, LossKind::AlphaDIoU,
                                 LossKind::AlphaCIoU, LossKind::LogIoU};

  const auto acceptable = [](const Box& p, const Box& g) {
    // stay away from subgradient kinks: corner ties, tangency, zero center
    // offset, matching aspect ratios, vanishing overlap
    if (std::abs(p.x1() - g.x1()) < 1e-4 || std::abs(p.x2() - g.x2()) < 1e-4 ||
        std::abs(p.y1() - g.y1()) < 1e-4 || std::abs(p.y2() - g.y2()) < 1e-4) {
      return false;
    }
    const double ox = std::min(p.x2(), g.x2()) - std::max(p.x1(), g.x1());
    const double oy = std::min(p.y2(), g.y2()) - std::max(p.y1(), g.y1());
    if (ox < 1e-3 || oy < 1e-3) return false;
    const GeometrySummary s = summarize(p, g);
    if (s.iou < 0.02) return false;
    if (s.center_dist_sq < 1e-6) return false;
    if (std::abs(std::atan(g.w / g.h) - std::atan(p.w / p.h)) < 1e-3) return false;
    return true;
  };

  double max_abs = 0.0;
  double max_rel = 0.0;
  std::optional<GradCase> worst;
  int done = 0;
  while (done < n_random) {
    const LossKind kind = kKinds[rng() % 5];
    const double a1 = uniform_range(rng, 0.5, 5.0);
    const double a2 = (rng() & 1) ? a1 : uniform_range(rng, 0.5, 5.0);
    const LossSpec spec = kind == LossKind::LogIoU ? LossSpec(kind) : LossSpec(kind, a1, a2);

    const double gw = uniform_range(rng, 0.15, 0.5);
    const double gh = uniform_range(rng, 0.15, 0.5);
    const Box gt(uniform_range(rng, 0.5 * gw, 1.0 - 0.5 * gw),
                 uniform_range(rng, 0.5 * gh, 1.0 - 0.5 * gh), gw, gh);
    const Box pred(gt.cx + gt.w * uniform_range(rng, -0.6, 0.6),
                   gt.cy + gt.h * uniform_range(rng, -0.6, 0.6),
                   gt.w * uniform_range(rng, 0.6, 1.6), gt.h * uniform_range(rng, 0.6, 1.6));
    if (!acceptable(pred, gt)) continue;

    const std::array<double, 4> analytic = loss_eval(spec, pred, gt).grad_pred;
    const std::array<double, 4> fd = fd_gradient(spec, pred, gt);
    // relative error on the whole gradient vector; a per-component ratio is
    // ill-conditioned wherever a single component crosses zero
    double diff_sq = 0.0, a_sq = 0.0, f_sq = 0.0;
    for (int j = 0; j < 4; ++j) {
      const double d = analytic[j] - fd[j];
      diff_sq += d * d;
      a_sq += analytic[j] * analytic[j];
      f_sq += fd[j] * fd[j];
      max_abs = std::max(max_abs, std::abs(d));
    }
    const double rel_err =
        std::sqrt(diff_sq) / std::max({std::sqrt(a_sq), std::sqrt(f_sq), 1e-8});
    if (!worst || rel_err > max_rel) worst = GradCase{spec, pred, gt};
    max_rel = std::max(max_rel, rel_err);
    ++done;
  }
  return GradReport{max_abs, max_rel, *worst, done};
}

std::string grad_report_json(const GradReport& report) {
  const auto box_json = [](const Box& b) {
    return nlohmann::json{b.cx, b.cy, b.w, b.h};
  };
  nlohmann::json j{
      {"n_checked", report.n_checked},
      {"max_abs_err", report.max_abs_err},
      {"max_rel_err", report.max_rel_err},
      {"worst_case",
       {{"kind", to_string(report.worst_case.spec.kind)},
        {"alpha1", report.worst_case.spec.alpha1},
        {"alpha2", report.worst_case.spec.alpha2},
        {"pred", box_json(report.worst_case.pred)},
        {"gt", box_json(report.worst_case.gt)}}},
  };
  return j.dump(2);
}

}  // namespace alphaiou
