#include "alphaiou/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace alphaiou {

namespace {

constexpr double kHistogramBuckets[] = {0.5, 0.6, 0.7, 0.8, 0.9};

std::optional<double> ap_at(const std::map<double, double>& ap, double t) {
  const auto it = ap.lower_bound(t - 1e-9);
  if (it != ap.end() && std::abs(it->first - t) <= 1e-9) return it->second;
  return std::nullopt;
}

std::optional<double> mean_ap_over(const std::map<double, double>& ap, double lo, int n) {
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto v = ap_at(ap, lo + 0.05 * i);
    if (!v) return std::nullopt;
    total += *v;
  }
  return total / n;
}

std::string format_key(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<Detection> nms(std::vector<Detection> dets, double iou_thresh) {
  if (!(iou_thresh >= 0.0) || !(iou_thresh <= 1.0)) {
    throw std::invalid_argument("nms: iou_thresh must lie in [0, 1]");
  }
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });

  std::vector<Detection> kept;
  for (std::size_t idx : order) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      return iou(dets[idx].box, k.box) > iou_thresh;
    });
    if (!suppressed) kept.push_back(dets[idx]);
  }
  return kept;
}

MatchResult match(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                  double iou_threshold) {
  MatchResult res;
  res.tp.assign(dets.size(), false);
  res.match_iou.assign(dets.size(), 0.0);
  std::vector<bool> taken(gts.size(), false);
  for (std::size_t i = 0; i < dets.size(); ++i) {
    double best = 0.0;
    std::size_t best_j = gts.size();
    for (std::size_t j = 0; j < gts.size(); ++j) {
      if (taken[j]) continue;
      const double v = iou(dets[i].box, gts[j].box);
      if (v > best) {
        best = v;
        best_j = j;
      }
    }
    if (best_j < gts.size() && best >= iou_threshold) {
      res.tp[i] = true;
      res.match_iou[i] = best;
      taken[best_j] = true;
    }
  }
  return res;
}

double average_precision(const std::vector<bool>& flags, const std::vector<double>& scores,
                         int n_gt) {
  if (flags.size() != scores.size()) {
    throw std::invalid_argument("average_precision: flags and scores must be parallel");
  }
  if (n_gt <= 0) throw std::invalid_argument("average_precision: n_gt must be positive");

  const std::size_t n = flags.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<double> prec(n), rec(n);
  int tp = 0, fp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    flags[order[k]] ? ++tp : ++fp;
    prec[k] = static_cast<double>(tp) / (tp + fp);
    rec[k] = static_cast<double>(tp) / n_gt;
  }
  for (std::size_t k = n; k-- > 1;) prec[k - 1] = std::max(prec[k - 1], prec[k]);

  // 101-point interpolation on the recall grid 0.00, 0.01, ..., 1.00
  double total = 0.0;
  std::size_t k = 0;
  for (int i = 0; i <= 100; ++i) {
    const double r = i / 100.0;
    while (k < n && rec[k] < r) ++k;
    if (k == n) break;
    total += prec[k];
  }
  return total / 101.0;
}

EvalReport evaluate(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                    const std::vector<double>& thresholds) {
  if (gts.empty()) throw std::invalid_argument("evaluate: no ground truth, AP undefined");
  if (thresholds.empty()) throw std::invalid_argument("evaluate: no thresholds");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0) || !(thresholds[i] <= 1.0)) {
      throw std::invalid_argument("evaluate: thresholds must lie in (0, 1]");
    }
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      throw std::invalid_argument("evaluate: thresholds must be strictly ascending");
    }
  }

  using Key = std::pair<std::int64_t, std::int64_t>;  // (image, category)
  std::map<Key, std::vector<Detection>> det_groups;
  for (const Detection& d : dets) det_groups[{d.image_id, d.category}].push_back(d);
  for (auto& [key, group] : det_groups) group = nms(std::move(group), kNmsIoUThreshold);

  std::map<Key, std::vector<GroundTruth>> gt_groups;
  std::map<std::int64_t, int> gt_count;
  for (const GroundTruth& g : gts) {
    gt_groups[{g.image_id, g.category}].push_back(g);
    ++gt_count[g.category];
  }

  static const std::vector<GroundTruth> kNoGts;
  const auto gts_for = [&](const Key& key) -> const std::vector<GroundTruth>& {
    const auto it = gt_groups.find(key);
    return it == gt_groups.end() ? kNoGts : it->second;
  };

  EvalReport report{};
  for (double t : thresholds) {
    double ap_total = 0.0;
    for (const auto& [cat, n_gt] : gt_count) {
      std::vector<bool> flags;
      std::vector<double> scores;
      for (const auto& [key, surv] : det_groups) {
        if (key.second != cat) continue;
        const MatchResult m = match(surv, gts_for(key), t);
        for (std::size_t i = 0; i < surv.size(); ++i) {
          flags.push_back(m.tp[i]);
          scores.push_back(surv[i].score);
        }
      }
      ap_total += average_precision(flags, scores, n_gt);
    }
    report.ap_per_threshold[t] = ap_total / static_cast<double>(gt_count.size());
  }

  for (double bucket : kHistogramBuckets) report.iou_histogram[bucket] = 0;
  for (const auto& [key, surv] : det_groups) {
    const MatchResult m = match(surv, gts_for(key), 0.5);
    for (std::size_t i = 0; i < surv.size(); ++i) {
      if (!m.tp[i]) continue;
      for (double bucket : kHistogramBuckets) {
        if (m.match_iou[i] >= bucket) ++report.iou_histogram[bucket];
      }
    }
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  report.map_50_95 = mean_ap_over(report.ap_per_threshold, 0.50, 10).value_or(nan);
  report.map_75_95 = mean_ap_over(report.ap_per_threshold, 0.75, 5).value_or(nan);
  return report;
}

std::string eval_report_json(const EvalReport& report) {
  nlohmann::json ap = nlohmann::json::object();
  for (const auto& [t, v] : report.ap_per_threshold) ap[format_key(t)] = v;
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [b, n] : report.iou_histogram) hist[format_key(b)] = n;
  const nlohmann::json j{
      {"ap_per_threshold", ap},
      {"map_50_95", report.map_50_95},  // NaN serializes as null
      {"map_75_95", report.map_75_95},
      {"iou_histogram", hist},
  };
  return j.dump(2);
}

void write_histogram_csv(std::ostream& os, const EvalReport& report) {
  os << "bucket,count\n";
  for (const auto& [b, n] : report.iou_histogram) os << b << ',' << n << '\n';
}

}  // namespace alphaiou
