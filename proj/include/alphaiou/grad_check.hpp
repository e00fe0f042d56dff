#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "alphaiou/losses.hpp"

namespace alphaiou {

struct GradCase {
  LossSpec spec;
  Box pred;
  Box gt;
};

struct GradReport {
  double max_abs_err;
  double max_rel_err;
  GradCase worst_case;  // the pair behind max_rel_err
  int n_checked;
};

/// Central-difference gradient of the loss with respect to the predicted
/// box. For AlphaCIoU the coupling coefficient beta is pinned at its value
/// for the unperturbed pair, so the difference quotient targets the same
/// function the analytic gradient differentiates. If a perturbed extent
/// would fall below kMinExtent the step shrinks once by 10x; if it still
/// would, throws std::domain_error.
std::array<double, 4> fd_gradient(const LossSpec& spec, const Box& pred, const Box& gt,
                                  double step = 1e-6);

/// Compares analytic against finite-difference gradients over n_random
/// sampled (spec, pred, gt) cases. Sampling avoids the subgradient kinks
/// (near-equal corners, tangent edges, vanishing overlap or center offset,
/// matching aspect ratios) where the two estimates legitimately disagree.
/// Deterministic for a fixed seed.
GradReport sweep_check(int n_random, std::uint64_t seed);

std::string grad_report_json(const GradReport& report);

}  // namespace alphaiou
