#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "alphaiou/geometry.hpp"

namespace alphaiou {

// NMS threshold baked into the evaluation protocol.
inline constexpr double kNmsIoUThreshold = 0.5;

struct Detection {
  std::int64_t image_id;
  std::int64_t category;
  Box box;
  double score;

  bool operator==(const Detection&) const = default;
};

struct GroundTruth {
  std::int64_t image_id;
  std::int64_t category;
  Box box;

  bool operator==(const GroundTruth&) const = default;
};

struct EvalReport {
  std::map<double, double> ap_per_threshold;  // IoU threshold -> AP averaged over categories
  double map_50_95;                           // NaN unless all ten thresholds were evaluated
  double map_75_95;                           // NaN unless thresholds 0.75..0.95 were evaluated
  std::map<double, int> iou_histogram;        // bucket -> true positives with match IoU >= bucket
};

/// Greedy non-maximum suppression over one image+category group: walk
/// detections in descending score (ties: lower input index first) and keep
/// those whose IoU with every already-kept box is <= iou_thresh. Returns the
/// kept detections in that order.
std::vector<Detection> nms(std::vector<Detection> dets, double iou_thresh);

struct MatchResult {
  std::vector<bool> tp;           // per detection, aligned with the input order
  std::vector<double> match_iou;  // IoU with the matched ground truth, 0 for misses
};

/// Greedy matching for one image+category group. Detections must already be
/// sorted by descending score; each takes the highest-IoU unmatched ground
/// truth and counts as a true positive when that IoU reaches the threshold.
MatchResult match(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                  double iou_threshold);

/// 101-point interpolated average precision. flags/scores are parallel
/// per-detection arrays (any order; sorted internally by descending score,
/// ties keeping input order); n_gt must be positive.
double average_precision(const std::vector<bool>& flags, const std::vector<double>& scores,
                         int n_gt);

/// Full protocol: NMS at kNmsIoUThreshold per image+category, greedy matching
/// per threshold, AP averaged over categories that have ground truth, plus a
/// histogram of matched-IoU counts at buckets 0.5..0.9. Throws when gts is
/// empty (AP undefined) or thresholds are not ascending in (0, 1].
EvalReport evaluate(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                    const std::vector<double>& thresholds);

std::string eval_report_json(const EvalReport& report);

/// CSV with header bucket,count.
void write_histogram_csv(std::ostream& os, const EvalReport& report);

}  // namespace alphaiou
