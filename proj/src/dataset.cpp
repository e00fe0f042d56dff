#include "alphaiou/dataset.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace alphaiou {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

struct RawEntry {
  std::int64_t image_id;
  std::int64_t category;
  std::array<double, 4> bbox;
  double score;
};

RawEntry parse_entry(const json& e, bool want_score) {
  RawEntry out{};
  out.image_id = e.at("image_id").get<std::int64_t>();
  out.category = e.at("category_id").get<std::int64_t>();
  const json& bb = e.at("bbox");
  if (!bb.is_array() || bb.size() != 4) throw std::runtime_error("bbox must be [x, y, w, h]");
  for (int i = 0; i < 4; ++i) out.bbox[i] = bb.at(i).get<double>();
  out.score = want_score && e.contains("score") ? e.at("score").get<double>() : 1.0;
  return out;
}

Box to_normalized_box(const std::array<double, 4>& px, const ImageInfo& im) {
  if (!(px[2] > 0.0) || !(px[3] > 0.0)) throw std::runtime_error("bbox extents must be positive");
  return Box((px[0] + 0.5 * px[2]) / im.width, (px[1] + 0.5 * px[3]) / im.height,
             px[2] / im.width, px[3] / im.height);
}

std::string list_ids(const std::vector<std::int64_t>& ids) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ids.size() && i < 10; ++i) {
    if (i) os << ", ";
    os << ids[i];
  }
  if (ids.size() > 10) os << ", ... (" << ids.size() << " total)";
  return os.str();
}

// Normalizes and clamps one pixel bbox, counting the clamp when it mattered.
Box ingest_box(const std::string& context, const RawEntry& e, const ImageInfo& im,
               DatasetBundle& bundle) {
  try {
    const Box raw = to_normalized_box(e.bbox, im);
    if (!within_bounds(raw, 1e-6)) ++bundle.clamp_warnings;
    return clamp_to_bounds(raw);
  } catch (const std::exception& ex) {
    throw std::runtime_error(context + ": degenerate bbox: " + ex.what());
  }
}

json bbox_json(const std::array<double, 4>& bbox) {
  return json{bbox[0], bbox[1], bbox[2], bbox[3]};
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace

DatasetBundle load_annotations(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object() || !j.contains("images") || !j.contains("annotations")) {
    throw std::runtime_error(path + ": expected an object with images and annotations");
  }

  DatasetBundle bundle;
  for (const json& im : j.at("images")) {
    std::int64_t id = 0;
    try {
      id = im.at("id").get<std::int64_t>();
      const ImageInfo info{im.at("width").get<double>(), im.at("height").get<double>()};
      if (!(info.width > 0.0) || !(info.height > 0.0)) {
        throw std::runtime_error("non-positive image size");
      }
      if (!bundle.images.emplace(id, info).second) {
        throw std::runtime_error("duplicate image id");
      }
    } catch (const json::exception& e) {
      throw std::runtime_error(path + ": images entry: " + e.what());
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(path + ": image " + std::to_string(id) + ": " + e.what());
    }
  }

  std::vector<std::int64_t> unknown;
  std::size_t idx = 0;
  for (const json& an : j.at("annotations")) {
    const std::string context = path + ": annotations[" + std::to_string(idx) + "]";
    RawEntry e{};
    try {
      e = parse_entry(an, false);
    } catch (const json::exception& ex) {
      throw std::runtime_error(context + ": " + ex.what());
    }
    const auto it = bundle.images.find(e.image_id);
    if (it == bundle.images.end()) {
      unknown.push_back(e.image_id);
      ++idx;
      continue;
    }
    bundle.gts.push_back({e.image_id, e.category, ingest_box(context, e, it->second, bundle)});
    bundle.gt_bbox_px.push_back(e.bbox);
    ++idx;
  }
  if (!unknown.empty()) {
    throw std::runtime_error(path + ": annotations reference unknown image_id(s): " +
                             list_ids(unknown));
  }
  return bundle;
}

DatasetBundle load_detections(const std::string& path, DatasetBundle bundle) {
  const json j = parse_file(path);
  const json* entries = nullptr;
  if (j.is_array()) {
    entries = &j;
  } else if (j.is_object() && j.contains("detections")) {
    entries = &j.at("detections");
  } else if (j.is_object() && j.contains("annotations")) {
    entries = &j.at("annotations");
  } else {
    throw std::runtime_error(path + ": expected a detection array");
  }

  bundle.dets.clear();
  bundle.det_bbox_px.clear();
  std::vector<std::int64_t> unknown;
  std::size_t idx = 0;
  for (const json& de : *entries) {
    const std::string context = path + ": detections[" + std::to_string(idx) + "]";
    RawEntry e{};
    try {
      e = parse_entry(de, true);
    } catch (const json::exception& ex) {
      throw std::runtime_error(context + ": " + ex.what());
    }
    const auto it = bundle.images.find(e.image_id);
    if (it == bundle.images.end()) {
      unknown.push_back(e.image_id);
      ++idx;
      continue;
    }
    bundle.dets.push_back(
        {e.image_id, e.category, ingest_box(context, e, it->second, bundle), e.score});
    bundle.det_bbox_px.push_back(e.bbox);
    ++idx;
  }
  if (!unknown.empty()) {
    throw std::runtime_error(path + ": detections reference unknown image_id(s): " +
                             list_ids(unknown));
  }
  return bundle;
}

void save_annotations(const std::string& path, const DatasetBundle& bundle) {
  json images = json::array();
  for (const auto& [id, info] : bundle.images) {
    images.push_back({{"id", id}, {"width", info.width}, {"height", info.height}});
  }
  json annotations = json::array();
  for (std::size_t i = 0; i < bundle.gts.size(); ++i) {
    annotations.push_back({{"image_id", bundle.gts[i].image_id},
                           {"category_id", bundle.gts[i].category},
                           {"bbox", bbox_json(bundle.gt_bbox_px[i])}});
  }
  write_file(path, json{{"images", images}, {"annotations", annotations}});
}

void save_detections(const std::string& path, const DatasetBundle& bundle) {
  json dets = json::array();
  for (std::size_t i = 0; i < bundle.dets.size(); ++i) {
    dets.push_back({{"image_id", bundle.dets[i].image_id},
                    {"category_id", bundle.dets[i].category},
                    {"bbox", bbox_json(bundle.det_bbox_px[i])},
                    {"score", bundle.dets[i].score}});
  }
  write_file(path, dets);
}

std::array<double, 4> to_pixel_bbox(const Box& box, const ImageInfo& image) {
  return {box.x1() * image.width, box.y1() * image.height, box.w * image.width,
          box.h * image.height};
}

}  // namespace alphaiou
