#pragma once

#include <array>

namespace alphaiou {

// Smallest extent a box may have; anything thinner is degenerate.
inline constexpr double kMinExtent = 1e-8;

/// Axis-aligned box in normalized image coordinates, stored in center form.
/// Extents must be strictly positive. Centers are unconstrained so that
/// intermediate optimizer states may leave the unit square; use
/// clamp_to_bounds() to project back into the feasible region.
struct Box {
  double cx;
  double cy;
  double w;
  double h;

  Box(double cx_, double cy_, double w_, double h_);

  static Box from_corners(double x1, double y1, double x2, double y2);

  double x1() const { return cx - 0.5 * w; }
  double y1() const { return cy - 0.5 * h; }
  double x2() const { return cx + 0.5 * w; }
  double y2() const { return cy + 0.5 * h; }
  double area() const { return w * h; }

  bool operator==(const Box&) const = default;
};

/// Relative geometric quantities consumed by the loss family.
struct GeometrySummary {
  double iou;               // |A∩B| / |A∪B|, in [0,1]
  double enclosure_excess;  // |C \ (A∪B)| / |C| for the smallest enclosing box C, in [0,1)
  double center_dist_sq;    // squared center distance
  double diag_sq;           // squared diagonal of the smallest enclosing box
  double v;                 // aspect-ratio consistency term, in [0,1]
};

/// Everything summarize() reports plus derivatives of the relative
/// quantities with respect to the predicted box (cx, cy, w, h). At
/// intersection-corner ties the symmetric half subgradient applies, so two
/// identical boxes sit at a stationary point; enclosing-box corner ties
/// resolve to the predicted side.
struct GeometryDetail {
  GeometrySummary summary;
  std::array<double, 4> d_iou;
  std::array<double, 4> d_excess;
  std::array<double, 4> d_dist_ratio;  // derivative of center_dist_sq / diag_sq
  std::array<double, 4> d_v;
};

double iou(const Box& a, const Box& b);

GeometrySummary summarize(const Box& pred, const Box& gt);

GeometryDetail summarize_with_gradients(const Box& pred, const Box& gt);

/// Projects a box into 0 < w,h < 1, w/2 <= cx <= 1 - w/2, h/2 <= cy <= 1 - h/2.
/// Extents are clamped first (to [kMinExtent, 1 - kMinExtent]), then centers,
/// so a feasible center interval always exists.
Box clamp_to_bounds(const Box& b);

/// True when b already satisfies the constraints above, up to tol.
bool within_bounds(const Box& b, double tol = 0.0);

}  // namespace alphaiou
