#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "alphaiou/geometry.hpp"

namespace alphaiou {

enum class LossKind { AlphaIoU, AlphaGIoU, AlphaDIoU, AlphaCIoU, LogIoU };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

// IoU values below this floor are clamped before taking the log in LogIoU.
inline constexpr double kLogIoUFloor = 1e-7;

/// Which family member to evaluate: base kind plus the power applied to the
/// overlap term (alpha1) and to the penalty term (alpha2). The single-alpha
/// constructor keeps the two powers consistent. LogIoU ignores both.
struct LossSpec {
  LossKind kind;
  double alpha1;
  double alpha2;

  explicit LossSpec(LossKind kind_, double alpha_ = 1.0);
  LossSpec(LossKind kind_, double alpha1_, double alpha2_);
};

/// Loss value plus analytic derivatives. d_iou is the partial derivative of
/// the value with respect to IoU alone; it is -inf at IoU = 0 when alpha1 < 1
/// (the true one-sided limit). grad_pred is the full chain-rule gradient with
/// respect to the predicted box (cx, cy, w, h) and is always finite: the beta
/// coefficient of AlphaCIoU is treated as constant, and directions in which
/// the geometry does not change carry a zero gradient even when d_iou is
/// infinite.
struct LossEval {
  double value;
  double d_iou;
  std::array<double, 4> grad_pred;
};

double loss_value(const LossSpec& spec, const Box& pred, const Box& gt);
LossEval loss_eval(const LossSpec& spec, const Box& pred, const Box& gt);

/// (1 - iou^alpha) / (1 - iou); returns the analytic limit alpha at iou = 1.
double relative_loss_weight(double alpha, double iou);
/// alpha * iou^(alpha - 1); +inf at iou = 0 when alpha < 1.
double relative_grad_weight(double alpha, double iou);
/// iou - iou^alpha.
double absolute_loss_weight(double alpha, double iou);
/// alpha * iou^(alpha - 1) - 1.
double absolute_grad_weight(double alpha, double iou);

/// IoU at which relative_grad_weight crosses 1: alpha^(1/(1-alpha)).
/// For alpha within 1e-9 of 1 returns the limit 1/e.
double turning_point(double alpha);

struct CurveSample {
  double iou;
  double alpha;
  double loss;
  double grad_mag;
};

/// Samples loss value and |d loss / d IoU| on a uniform IoU grid over [0, 1]
/// for each alpha. Only kinds whose value is a function of IoU alone are
/// supported (AlphaIoU and LogIoU); penalty kinds depend on more than the
/// overlap and are rejected.
std::vector<CurveSample> curve_samples(LossKind kind, const std::vector<double>& alphas,
                                       int n_points);

/// CSV with header iou,alpha,loss,grad_mag.
void write_curve_csv(std::ostream& os, const std::vector<CurveSample>& samples);

}  // namespace alphaiou
