#include "alphaiou/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace alphaiou {

namespace {

constexpr double kAspectScale = 4.0 / (std::numbers::pi * std::numbers::pi);

// Per-axis overlap and enclosure of the predicted interval (center pc,
// extent pe) against the fixed interval [gl, gh], with derivatives with
// respect to pc and pe. At intersection-corner ties the symmetric half
// subgradient is used so a perfect match is a stationary point; enclosure
// ties resolve to the predicted side.
struct AxisGeom {
  double overlap;
  double d_overlap_dc;
  double d_overlap_de;
  double encl;
  double d_encl_dc;
  double d_encl_de;
};

AxisGeom axis_geom(double pl, double ph, double gl, double gh) {
  AxisGeom a{};
  a.overlap = std::min(ph, gh) - std::max(pl, gl);
  const double dlo = pl > gl ? 1.0 : pl == gl ? 0.5 : 0.0;
  const double dhi = ph < gh ? 1.0 : ph == gh ? 0.5 : 0.0;
  a.d_overlap_dc = dhi - dlo;
  a.d_overlap_de = 0.5 * (dhi + dlo);
  a.encl = std::max(ph, gh) - std::min(pl, gl);
  const double del = pl <= gl ? 1.0 : 0.0;
  const double deh = ph >= gh ? 1.0 : 0.0;
  a.d_encl_dc = deh - del;
  a.d_encl_de = 0.5 * (deh + del);
  return a;
}

}  // namespace

Box::Box(double cx_, double cy_, double w_, double h_) : cx(cx_), cy(cy_), w(w_), h(h_) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) || !std::isfinite(h)) {
    throw std::invalid_argument("Box: coordinates must be finite");
  }
  if (!(w >= kMinExtent) || !(h >= kMinExtent)) {
    throw std::invalid_argument("Box: extents must be at least kMinExtent");
  }
}

Box Box::from_corners(double x1, double y1, double x2, double y2) {
  return Box(0.5 * (x1 + x2), 0.5 * (y1 + y2), x2 - x1, y2 - y1);
}

double iou(const Box& a, const Box& b) {
  const double ox = std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1());
  const double oy = std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1());
  if (ox <= 0.0 || oy <= 0.0) return 0.0;
  const double inter = ox * oy;
  // Areas from corner differences so that identical boxes give exactly 1.
  const double area_a = (a.x2() - a.x1()) * (a.y2() - a.y1());
  const double area_b = (b.x2() - b.x1()) * (b.y2() - b.y1());
  const double uni = area_a + area_b - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

GeometrySummary summarize(const Box& pred, const Box& gt) {
  return summarize_with_gradients(pred, gt).summary;
}

GeometryDetail summarize_with_gradients(const Box& pred, const Box& gt) {
  const double px1 = pred.x1(), px2 = pred.x2(), py1 = pred.y1(), py2 = pred.y2();
  const double gx1 = gt.x1(), gx2 = gt.x2(), gy1 = gt.y1(), gy2 = gt.y2();

  const AxisGeom ax = axis_geom(px1, px2, gx1, gx2);
  const AxisGeom ay = axis_geom(py1, py2, gy1, gy2);

  const bool overlapping = ax.overlap > 0.0 && ay.overlap > 0.0;
  const double inter = overlapping ? ax.overlap * ay.overlap : 0.0;
  // index order: cx, cy, w, h
  std::array<double, 4> d_inter{};
  if (overlapping) {
    d_inter = {ay.overlap * ax.d_overlap_dc, ax.overlap * ay.d_overlap_dc,
               ay.overlap * ax.d_overlap_de, ax.overlap * ay.d_overlap_de};
  }

  const double area_p = (px2 - px1) * (py2 - py1);
  const double area_g = (gx2 - gx1) * (gy2 - gy1);
  const std::array<double, 4> d_area_p = {0.0, 0.0, py2 - py1, px2 - px1};

  const double uni = area_p + area_g - inter;
  std::array<double, 4> d_uni;
  for (int j = 0; j < 4; ++j) d_uni[j] = d_area_p[j] - d_inter[j];

  const double encl = ax.encl * ay.encl;
  const std::array<double, 4> d_encl = {ay.encl * ax.d_encl_dc, ax.encl * ay.d_encl_dc,
                                        ay.encl * ax.d_encl_de, ax.encl * ay.d_encl_de};

  GeometryDetail out{};
  out.summary.iou = std::clamp(inter / uni, 0.0, 1.0);
  out.summary.enclosure_excess = std::max((encl - uni) / encl, 0.0);
  for (int j = 0; j < 4; ++j) {
    out.d_iou[j] = (d_inter[j] * uni - inter * d_uni[j]) / (uni * uni);
    out.d_excess[j] = (uni * d_encl[j] - d_uni[j] * encl) / (encl * encl);
  }

  const double dx = pred.cx - gt.cx;
  const double dy = pred.cy - gt.cy;
  out.summary.center_dist_sq = dx * dx + dy * dy;
  const double diag_sq = ax.encl * ax.encl + ay.encl * ay.encl;
  out.summary.diag_sq = diag_sq;
  if (diag_sq > 0.0) {
    const std::array<double, 4> d_dist = {2.0 * dx, 2.0 * dy, 0.0, 0.0};
    const std::array<double, 4> d_diag = {2.0 * ax.encl * ax.d_encl_dc, 2.0 * ay.encl * ay.d_encl_dc,
                                          2.0 * ax.encl * ax.d_encl_de, 2.0 * ay.encl * ay.d_encl_de};
    for (int j = 0; j < 4; ++j) {
      out.d_dist_ratio[j] =
          (d_dist[j] * diag_sq - out.summary.center_dist_sq * d_diag[j]) / (diag_sq * diag_sq);
    }
  }

  const double t = std::atan(gt.w / gt.h) - std::atan(pred.w / pred.h);
  out.summary.v = kAspectScale * t * t;
  const double wh_sq = pred.w * pred.w + pred.h * pred.h;
  out.d_v = {0.0, 0.0, -2.0 * kAspectScale * t * pred.h / wh_sq,
             2.0 * kAspectScale * t * pred.w / wh_sq};
  return out;
}

Box clamp_to_bounds(const Box& b) {
  const double w = std::clamp(b.w, kMinExtent, 1.0 - kMinExtent);
  const double h = std::clamp(b.h, kMinExtent, 1.0 - kMinExtent);
  const double cx = std::clamp(b.cx, 0.5 * w, 1.0 - 0.5 * w);
  const double cy = std::clamp(b.cy, 0.5 * h, 1.0 - 0.5 * h);
  return Box(cx, cy, w, h);
}

bool within_bounds(const Box& b, double tol) {
  if (b.w < kMinExtent - tol || b.w > 1.0 - kMinExtent + tol) return false;
  if (b.h < kMinExtent - tol || b.h > 1.0 - kMinExtent + tol) return false;
  if (b.cx < 0.5 * b.w - tol || b.cx > 1.0 - 0.5 * b.w + tol) return false;
  if (b.cy < 0.5 * b.h - tol || b.cy > 1.0 - 0.5 * b.h + tol) return false;
  return true;
}

}  // namespace alphaiou
