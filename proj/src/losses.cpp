#include "alphaiou/losses.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace alphaiou {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be positive and finite");
  }
}

void require_unit_iou(double iou) {
  if (!(iou >= 0.0) || !(iou <= 1.0)) {
    throw std::invalid_argument("iou must lie in [0, 1]");
  }
}

// c * g per component, except that a zero direction stays exactly zero so an
// infinite d_iou sentinel cannot leak into the box gradient.
std::array<double, 4> scale_guarded(const std::array<double, 4>& g, double c) {
  std::array<double, 4> r{};
  for (int j = 0; j < 4; ++j) r[j] = g[j] == 0.0 ? 0.0 : c * g[j];
  return r;
}

// Adds base^alpha and its chain-rule gradient. A non-positive base sits on
// the flat side of the penalty's minimum: contributes nothing.
void add_penalty(LossEval& e, double base, double alpha, const std::array<double, 4>& d_base) {
  if (base <= 0.0) return;
  e.value += std::pow(base, alpha);
  const double coef = alpha * std::pow(base, alpha - 1.0);
  for (int j = 0; j < 4; ++j) e.grad_pred[j] += coef * d_base[j];
}

}  // namespace

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::AlphaIoU: return "alpha-iou";
    case LossKind::AlphaGIoU: return "alpha-giou";
    case LossKind::AlphaDIoU: return "alpha-diou";
    case LossKind::AlphaCIoU: return "alpha-ciou";
    case LossKind::LogIoU: return "log-iou";
  }
  throw std::invalid_argument("unknown LossKind");
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "alpha-iou" || name == "iou") return LossKind::AlphaIoU;
  if (name == "alpha-giou" || name == "giou") return LossKind::AlphaGIoU;
  if (name == "alpha-diou" || name == "diou") return LossKind::AlphaDIoU;
  if (name == "alpha-ciou" || name == "ciou") return LossKind::AlphaCIoU;
  if (name == "log-iou" || name == "log") return LossKind::LogIoU;
  throw std::invalid_argument("unknown loss kind: " + name);
}

LossSpec::LossSpec(LossKind kind_, double alpha_) : LossSpec(kind_, alpha_, alpha_) {}

LossSpec::LossSpec(LossKind kind_, double alpha1_, double alpha2_)
    : kind(kind_), alpha1(alpha1_), alpha2(alpha2_) {
  require_alpha(alpha1);
  require_alpha(alpha2);
}

double loss_value(const LossSpec& spec, const Box& pred, const Box& gt) {
  return loss_eval(spec, pred, gt).value;
}

LossEval loss_eval(const LossSpec& spec, const Box& pred, const Box& gt) {
  const GeometryDetail g = summarize_with_gradients(pred, gt);
  const double iou = g.summary.iou;

  LossEval out{};
  if (spec.kind == LossKind::LogIoU) {
    out.value = -std::log(std::max(iou, kLogIoUFloor));
    out.d_iou = iou > kLogIoUFloor ? -1.0 / iou : 0.0;
    out.grad_pred = scale_guarded(g.d_iou, out.d_iou);
    return out;
  }

  out.value = 1.0 - std::pow(iou, spec.alpha1);
  out.d_iou = -spec.alpha1 * std::pow(iou, spec.alpha1 - 1.0);
  out.grad_pred = scale_guarded(g.d_iou, out.d_iou);

  switch (spec.kind) {
    case LossKind::AlphaIoU:
      break;
    case LossKind::AlphaGIoU:
      add_penalty(out, g.summary.enclosure_excess, spec.alpha2, g.d_excess);
      break;
    case LossKind::AlphaDIoU: {
      const double ratio = g.summary.diag_sq > 0.0 ? g.summary.center_dist_sq / g.summary.diag_sq : 0.0;
      add_penalty(out, ratio, spec.alpha2, g.d_dist_ratio);
      break;
    }
    case LossKind::AlphaCIoU: {
      const double ratio = g.summary.diag_sq > 0.0 ? g.summary.center_dist_sq / g.summary.diag_sq : 0.0;
      add_penalty(out, ratio, spec.alpha2, g.d_dist_ratio);
      const double v = g.summary.v;
      const double denom = (1.0 - iou) + v;
      // beta is a constant coefficient as far as the gradient is concerned
      const double beta = denom > 0.0 ? v / denom : 0.0;
      std::array<double, 4> d_bv{};
      for (int j = 0; j < 4; ++j) d_bv[j] = beta * g.d_v[j];
      add_penalty(out, beta * v, spec.alpha2, d_bv);
      break;
    }
    case LossKind::LogIoU:
      break;
  }
  return out;
}

double relative_loss_weight(double alpha, double iou) {
  require_alpha(alpha);
  require_unit_iou(iou);
  if (iou >= 1.0) return alpha;
  // (1 - iou^alpha) / (1 - iou) written to stay accurate as iou -> 1
  return -std::expm1(alpha * std::log1p(iou - 1.0)) / (1.0 - iou);
}

double relative_grad_weight(double alpha, double iou) {
  require_alpha(alpha);
  require_unit_iou(iou);
  return alpha * std::pow(iou, alpha - 1.0);
}

double absolute_loss_weight(double alpha, double iou) {
  require_alpha(alpha);
  require_unit_iou(iou);
  return iou - std::pow(iou, alpha);
}

double absolute_grad_weight(double alpha, double iou) {
  return relative_grad_weight(alpha, iou) - 1.0;
}

double turning_point(double alpha) {
  require_alpha(alpha);
  if (std::abs(alpha - 1.0) <= 1e-9) return std::exp(-1.0);
  return std::exp(std::log1p(alpha - 1.0) / (1.0 - alpha));
}

std::vector<CurveSample> curve_samples(LossKind kind, const std::vector<double>& alphas,
                                       int n_points) {
  if (kind != LossKind::AlphaIoU && kind != LossKind::LogIoU) {
    throw std::invalid_argument("curve_samples: " + to_string(kind) +
                                " is not a function of IoU alone");
  }
  if (n_points < 2) throw std::invalid_argument("curve_samples: n_points must be >= 2");
  if (alphas.empty()) throw std::invalid_argument("curve_samples: no alphas given");

  std::vector<CurveSample> out;
  out.reserve(alphas.size() * static_cast<std::size_t>(n_points));
  for (double a : alphas) {
    require_alpha(a);
    for (int i = 0; i < n_points; ++i) {
      const double iou = static_cast<double>(i) / (n_points - 1);
      CurveSample s{iou, a, 0.0, 0.0};
      if (kind == LossKind::AlphaIoU) {
        s.loss = 1.0 - std::pow(iou, a);
        s.grad_mag = relative_grad_weight(a, iou);
      } else {
        s.loss = -std::log(std::max(iou, kLogIoUFloor));
        s.grad_mag = iou > kLogIoUFloor ? 1.0 / iou : 0.0;
      }
      out.push_back(s);
    }
  }
  return out;
}

void write_curve_csv(std::ostream& os, const std::vector<CurveSample>& samples) {
  os << "iou,alpha,loss,grad_mag\n";
  os << std::setprecision(12);
  for (const CurveSample& s : samples) {
    os << s.iou << ',' << s.alpha << ',' << s.loss << ',' << s.grad_mag << '\n';
  }
}

}  // namespace alphaiou
