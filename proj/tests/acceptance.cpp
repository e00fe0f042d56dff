// Acceptance gate: one line per criterion, exit code = number of failures.
// Criterion 9 needs an annotation file (ALPHAIOU_VOC_ANNOTATIONS) and is
// reported as skipped when the variable is unset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "alphaiou/dataset.hpp"
#include "alphaiou/eval.hpp"
#include "alphaiou/grad_check.hpp"
#include "alphaiou/losses.hpp"
#include "alphaiou/noise.hpp"
#include "alphaiou/regression.hpp"
#include "alphaiou/rng.hpp"

using namespace alphaiou;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int n, const std::string& name, bool pass, double elapsed, double limit,
            const std::string& detail) {
  const bool ok = pass && elapsed < limit;
  std::ostringstream os;
  os << (ok ? "[PASS]" : "[FAIL]") << " criterion " << n << " " << name << ": " << detail;
  os << " [" << std::fixed;
  os.precision(2);
  os << elapsed << "s / " << limit << "s]";
  std::cout << os.str() << std::endl;
  if (!ok) ++g_failures;
}

void report_skip(int n, const std::string& name, const std::string& reason) {
  std::cout << "[SKIP] criterion " << n << " " << name << ": " << reason << std::endl;
}

Box random_box(std::mt19937_64& rng, double min_extent, double max_extent) {
  const double w = uniform_range(rng, min_extent, max_extent);
  const double h = uniform_range(rng, min_extent, max_extent);
  return Box(uniform_range(rng, 0.5 * w, 1.0 - 0.5 * w),
             uniform_range(rng, 0.5 * h, 1.0 - 0.5 * h), w, h);
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// 1. As alpha -> 0 the scaled power loss approaches the log loss:
//    (1 - iou^alpha) / alpha -> -log(iou). Checked through the library on
//    box pairs realizing each grid IoU; the grid starts one step inside the
//    open interval because at iou = 0.01 the true gap alpha*ln(iou)^2/2
//    already exceeds the tolerance.
void criterion_1() {
  Timer t;
  const double alpha = 1e-6;
  const LossSpec spec(LossKind::AlphaIoU, alpha);
  const Box gt(0.5, 0.5, 0.5, 0.5);
  double worst = 0.0;
  for (int i = 2; i <= 100; ++i) {
    const double x = i / 100.0;
    const double d = 0.5 * (1.0 - x) / (1.0 + x);  // center shift realizing iou = x
    const Box pred(0.5 + d, 0.5, 0.5, 0.5);
    const double actual_iou = iou(pred, gt);
    const double gap = std::abs(loss_value(spec, pred, gt) / alpha + std::log(actual_iou));
    worst = std::max(worst, gap);
  }
  report(1, "small-alpha limit recovers the log loss", worst <= 1e-5, t.seconds(), 1.0,
         "max gap " + sci(worst) + " over 99 grid points (tol 1e-05)");
}

// 2. At alpha = 1 every family member equals its classical counterpart.
void criterion_2() {
  Timer t;
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Box p = random_box(rng, 0.05, 0.6);
    const Box g = random_box(rng, 0.05, 0.6);

    const double ix = std::max(0.0, std::min(p.x2(), g.x2()) - std::max(p.x1(), g.x1()));
    const double iy = std::max(0.0, std::min(p.y2(), g.y2()) - std::max(p.y1(), g.y1()));
    const double inter = ix * iy;
    const double uni = p.area() + g.area() - inter;
    const double iou_ref = inter / uni;
    const double cw = std::max(p.x2(), g.x2()) - std::min(p.x1(), g.x1());
    const double ch = std::max(p.y2(), g.y2()) - std::min(p.y1(), g.y1());
    const double excess = (cw * ch - uni) / (cw * ch);
    const double rho2 = (p.cx - g.cx) * (p.cx - g.cx) + (p.cy - g.cy) * (p.cy - g.cy);
    const double diag2 = cw * cw + ch * ch;
    const double tt = std::atan(g.w / g.h) - std::atan(p.w / p.h);
    const double v = 4.0 / (M_PI * M_PI) * tt * tt;
    const double beta = v / ((1.0 - iou_ref) + v);

    const double refs[4] = {1.0 - iou_ref, 1.0 - iou_ref + excess,
                            1.0 - iou_ref + rho2 / diag2,
                            1.0 - iou_ref + rho2 / diag2 + beta * v};
    const LossKind kinds[4] = {LossKind::AlphaIoU, LossKind::AlphaGIoU, LossKind::AlphaDIoU,
                               LossKind::AlphaCIoU};
    for (int k = 0; k < 4; ++k) {
      worst = std::max(worst, std::abs(loss_value(LossSpec(kinds[k], 1.0), p, g) - refs[k]));
    }
  }
  report(2, "alpha=1 matches the classical losses", worst <= 1e-12, t.seconds(), 1.0,
         "max |diff| " + sci(worst) + " over 1000 pairs x 4 kinds (tol 1e-12)");
}

// 3. The power transform never reorders a pair of predictions: higher IoU
//    must never mean higher loss.
void criterion_3() {
  Timer t;
  std::mt19937_64 rng(3);
  const double alphas[] = {0.5, 1.0, 2.0, 3.0, 5.0};
  long violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const Box gt = random_box(rng, 0.1, 0.6);
    const Box bi = random_box(rng, 0.05, 0.7);
    const Box bj = random_box(rng, 0.05, 0.7);
    const double iou_i = iou(bi, gt);
    const double iou_j = iou(bj, gt);
    for (double a : alphas) {
      const LossSpec spec(LossKind::AlphaIoU, a);
      const double li = loss_value(spec, bi, gt);
      const double lj = loss_value(spec, bj, gt);
      if ((iou_i > iou_j && li > lj) || (iou_i < iou_j && li < lj)) ++violations;
    }
  }
  report(3, "power loss preserves IoU ordering", violations == 0, t.seconds(), 5.0,
         std::to_string(violations) + " violations over 10000 triples x 5 alphas");
}

// 4. Closed-form weight properties: endpoint values, the location of the
//    gradient-weight crossover found independently by bisection, and the
//    extrema of the absolute-weight curves.
void criterion_4() {
  Timer t;
  bool ok = true;
  std::ostringstream why;

  for (double a : {0.5, 1.0, 2.0, 3.0, 5.0}) {
    if (relative_loss_weight(a, 0.0) != 1.0) {
      ok = false;
      why << " w_r(0)!=1 at alpha=" << a << ";";
    }
    if (std::abs(relative_loss_weight(a, 1.0 - 1e-9) - a) > 1e-6) {
      ok = false;
      why << " w_r(1-1e-9) off at alpha=" << a << ";";
    }
  }

  for (double a : {0.5, 2.0, 3.0, 5.0}) {
    double lo = 1e-12, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double f = relative_grad_weight(a, mid) - 1.0;
      const double flo = relative_grad_weight(a, lo) - 1.0;
      ((f > 0.0) == (flo > 0.0) ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    if (std::abs(root - turning_point(a)) > 1e-9) {
      ok = false;
      why << " bisection root off at alpha=" << a << ";";
    }
  }

  if (std::abs(turning_point(1.0 + 1e-9) - std::exp(-1.0)) > 1e-6 ||
      std::abs(turning_point(1.0 - 1e-9) - std::exp(-1.0)) > 1e-6) {
    ok = false;
    why << " turning point near alpha=1 off;";
  }

  if (std::abs(absolute_loss_weight(2.0, 0.5) - 0.25) > 1e-9) {
    ok = false;
    why << " w_a(2, 0.5) != 0.25;";
  }
  if (std::abs(absolute_loss_weight(0.5, 0.25) + 0.25) > 1e-9) {
    ok = false;
    why << " w_a(0.5, 0.25) != -0.25;";
  }
  for (int i = 0; i <= 10000; ++i) {
    const double x = i / 10000.0;
    if (absolute_loss_weight(2.0, x) > 0.25 + 1e-15 ||
        absolute_loss_weight(0.5, x) < -0.25 - 1e-15) {
      ok = false;
      why << " extremum exceeded at iou=" << x << ";";
      break;
    }
  }

  report(4, "weight closed forms and turning points", ok, t.seconds(), 1.0,
         ok ? "endpoints, bisection roots, and extrema all within tolerance"
            : "issues:" + why.str());
}

// 5. Analytic gradients against central differences over randomized kinds,
//    powers, and geometries.
void criterion_5() {
  Timer t;
  const GradReport r = sweep_check(1000, 12345);
  report(5, "analytic gradients match finite differences", r.max_rel_err <= 1e-4, t.seconds(),
         10.0,
         "max rel err " + sci(r.max_rel_err) + " over " + std::to_string(r.n_checked) +
             " cases (tol 1e-04)");
}

// 6. Descent dynamics on fixed fixtures: the higher power reaches IoU 0.95
//    first from an overlapping start, and only the enclosure-penalized loss
//    escapes a disjoint start.
void criterion_6() {
  Timer t;
  const Box init(0.55, 0.54, 0.30, 0.50);  // iou with gt ~ 0.63
  const Box gt(0.5, 0.5, 0.4, 0.4);
  const double lr = 0.001;
  const RegressionRun run1 = regress(LossSpec(LossKind::AlphaIoU, 1.0), init, gt, lr, 2000);
  const RegressionRun run3 = regress(LossSpec(LossKind::AlphaIoU, 3.0), init, gt, lr, 2000);
  const auto s1 = steps_to_reach(run1, 0.95);
  const auto s3 = steps_to_reach(run3, 0.95);
  const bool faster = s1.has_value() && s3.has_value() && *s3 < *s1;

  const Box far_init(0.2, 0.2, 0.2, 0.2);
  const Box far_gt(0.7, 0.7, 0.2, 0.2);
  const RegressionRun stalled =
      regress(LossSpec(LossKind::AlphaIoU, 2.0), far_init, far_gt, 0.01, 500);
  bool stayed_zero = true;
  for (const TrajectoryPoint& p : stalled.trajectory) stayed_zero &= p.iou == 0.0;
  const RegressionRun escaped =
      regress(LossSpec(LossKind::AlphaGIoU, 2.0), far_init, far_gt, 0.01, 500);
  bool overlapped = false;
  for (const TrajectoryPoint& p : escaped.trajectory) overlapped |= p.iou > 0.0;

  std::ostringstream detail;
  detail << "steps to IoU 0.95: alpha=3 " << (s3 ? std::to_string(*s3) : "never") << " vs alpha=1 "
         << (s1 ? std::to_string(*s1) : "never") << "; disjoint start: plain "
         << (stayed_zero ? "stalled" : "moved") << ", enclosure-penalized "
         << (overlapped ? "overlapped" : "stalled");
  report(6, "descent dynamics", faster && stayed_zero && overlapped, t.seconds(), 5.0,
         detail.str());
}

// 7. The AP engine against a direct PR-envelope oracle over every outcome
//    pattern with <= 6 detections and <= 4 ground truths, plus the exact
//    single-detection fixture.
void criterion_7() {
  Timer t;
  const auto oracle = [](const std::vector<bool>& flags, int n_gt) {
    std::vector<double> prec, rec;
    int tp = 0, fp = 0;
    for (bool f : flags) {
      f ? ++tp : ++fp;
      prec.push_back(static_cast<double>(tp) / (tp + fp));
      rec.push_back(static_cast<double>(tp) / n_gt);
    }
    double total = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double r = i / 100.0;
      double best = 0.0;
      for (std::size_t k = 0; k < rec.size(); ++k) {
        if (rec[k] >= r) best = std::max(best, prec[k]);
      }
      total += best;
    }
    return total / 101.0;
  };

  double worst = 0.0;
  long cases = 0;
  for (int n_gt = 1; n_gt <= 4; ++n_gt) {
    for (int n_det = 0; n_det <= 6; ++n_det) {
      for (int mask = 0; mask < (1 << n_det); ++mask) {
        std::vector<bool> flags;
        std::vector<double> scores;
        int tp = 0;
        for (int i = 0; i < n_det; ++i) {
          const bool f = (mask >> i) & 1;
          tp += f;
          flags.push_back(f);
          scores.push_back(1.0 - 0.05 * i);
        }
        if (tp > n_gt) continue;
        worst = std::max(worst,
                         std::abs(average_precision(flags, scores, n_gt) - oracle(flags, n_gt)));
        ++cases;
      }
    }
  }

  const std::vector<GroundTruth> gts = {{1, 1, Box(0.5, 0.5, 0.5, 0.5)}};
  const std::vector<Detection> dets = {{1, 1, Box(0.625, 0.5, 0.5, 0.5), 0.9}};
  const std::vector<double> thresholds = {0.5,  0.55, 0.6,  0.65, 0.7,
                                          0.75, 0.8,  0.85, 0.9,  0.95};
  const EvalReport rep = evaluate(dets, gts, thresholds);
  const bool exact = rep.map_50_95 == 0.3;

  report(7, "AP engine equals the PR-envelope oracle", worst <= 1e-12 && exact, t.seconds(), 10.0,
         "max |diff| " + sci(worst) + " over " + std::to_string(cases) +
             " patterns; single-detection mAP50:95 " + (exact ? "== 0.3 exactly" : "!= 0.3"));
}

// 8. Every perturbed box stays feasible, and the corpus mean IoU strictly
//    decreases as the noise rate grows.
void criterion_8() {
  Timer t;
  std::mt19937_64 rng(88);
  std::vector<GroundTruth> corpus;
  corpus.reserve(100000);
  for (int i = 0; i < 100000; ++i) {
    corpus.push_back({i, 1, random_box(rng, 0.02, 0.9)});
  }
  bool all_feasible = true;
  double means[3] = {};
  const double etas[3] = {0.1, 0.2, 0.3};
  for (int e = 0; e < 3; ++e) {
    const DegradeResult res = degrade_dataset(corpus, NoiseConfig(etas[e], 1000 + e));
    means[e] = res.mean_iou;
    for (const GroundTruth& g : res.noisy) all_feasible &= within_bounds(g.box);
  }
  const bool monotone = means[0] > means[1] && means[1] > means[2];
  std::ostringstream detail;
  detail.precision(4);
  detail << std::fixed << "mean IoU " << means[0] << " / " << means[1] << " / " << means[2]
         << " at eta 0.1/0.2/0.3; feasibility " << (all_feasible ? "100%" : "violated");
  report(8, "noise feasibility and monotonicity", all_feasible && monotone, t.seconds(), 5.0,
         detail.str());
}

// 9. Mean IoU after degrading real VOC trainval annotations, averaged over
//    three seeds, against the reference means 0.833 / 0.710 / 0.613.
void criterion_9() {
  const char* path = std::getenv("ALPHAIOU_VOC_ANNOTATIONS");
  if (path == nullptr || *path == '\0') {
    report_skip(9, "VOC degradation means", "set ALPHAIOU_VOC_ANNOTATIONS to a COCO-style "
                                            "annotation JSON of VOC trainval 2007+2012 to run");
    return;
  }
  Timer t;
  try {
    const DatasetBundle bundle = load_annotations(path);
    const double targets[3] = {0.833, 0.710, 0.613};
    const double etas[3] = {0.1, 0.2, 0.3};
    bool ok = true;
    std::ostringstream detail;
    detail.precision(4);
    detail << std::fixed;
    for (int e = 0; e < 3; ++e) {
      double total = 0.0;
      for (std::uint64_t seed : {1, 2, 3}) {
        total += degrade_dataset(bundle.gts, NoiseConfig(etas[e], seed)).mean_iou;
      }
      const double mean = total / 3.0;
      ok = ok && std::abs(mean - targets[e]) <= 0.01;
      if (e) detail << ", ";
      detail << mean << " vs " << targets[e];
    }
    detail << " (tol 0.01, " << bundle.gts.size() << " boxes)";
    report(9, "VOC degradation means", ok, t.seconds(), 120.0, detail.str());
  } catch (const std::exception& e) {
    report(9, "VOC degradation means", false, t.seconds(), 120.0,
           std::string("failed to load annotations: ") + e.what());
  }
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures == 0) {
    std::cout << "all criteria passed or skipped" << std::endl;
  } else {
    std::cout << g_failures << " criterion(s) failed" << std::endl;
  }
  return g_failures;
}
