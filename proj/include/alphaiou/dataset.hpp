#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "alphaiou/eval.hpp"

namespace alphaiou {

struct ImageInfo {
  double width;   // pixels
  double height;

  bool operator==(const ImageInfo&) const = default;
};

/// Annotations (and optionally detections) of one dataset, normalized to
/// canonical boxes. The original pixel bboxes are kept verbatim so that
/// saving reproduces the input file contents.
struct DatasetBundle {
  std::map<std::int64_t, ImageInfo> images;
  std::vector<GroundTruth> gts;
  std::vector<Detection> dets;
  std::vector<std::array<double, 4>> gt_bbox_px;   // [x, y, w, h] as loaded
  std::vector<std::array<double, 4>> det_bbox_px;
  int clamp_warnings = 0;

  bool operator==(const DatasetBundle&) const = default;
};

/// Reads {"images": [{id, width, height}], "annotations": [{image_id,
/// category_id, bbox: [x, y, w, h]}]} with bboxes in absolute pixels.
/// Boxes reaching past the image edge are clamped and counted in
/// clamp_warnings. Unknown image ids and degenerate bboxes are errors.
DatasetBundle load_annotations(const std::string& path);

/// Adds detections to a loaded bundle. Accepts a bare JSON array of
/// {image_id, category_id, bbox, score} entries or an object wrapping such
/// an array under "detections" or "annotations"; a missing score defaults
/// to 1.0 so saved annotation files can serve as pseudo-detections.
DatasetBundle load_detections(const std::string& path, DatasetBundle bundle);

void save_annotations(const std::string& path, const DatasetBundle& bundle);
void save_detections(const std::string& path, const DatasetBundle& bundle);

std::array<double, 4> to_pixel_bbox(const Box& box, const ImageInfo& image);

}  // namespace alphaiou
