#include "detkit/coco.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "detkit/errors.hpp"
#include "json.hpp"

namespace detkit {

using json = nlohmann::json;

namespace {

std::string entity_msg(const char* what, const char* entity, std::int64_t id) {
  return std::string(what) + " (" + entity + " id " + std::to_string(id) + ")";
}

// Pick w such that the reader's x1 + w reproduces x2 exactly; the naive
// x2 - x1 can be one ulp off for awkward operands.
double span_for_roundtrip(double lo, double hi) {
  double w = hi - lo;
  if (lo + w == hi) return w;
  const double up = std::nextafter(w, std::numeric_limits<double>::infinity());
  if (lo + up == hi) return up;
  const double dn = std::nextafter(w, -std::numeric_limits<double>::infinity());
  if (lo + dn == hi) return dn;
  return w;
}

json bbox_to_xywh(const BBox& b) {
  return json::array({b.x1, b.y1, span_for_roundtrip(b.x1, b.x2),
                      span_for_roundtrip(b.y1, b.y2)});
}

BBox bbox_from_xywh(const json& arr, const char* entity, std::int64_t id) {
  if (!arr.is_array() || arr.size() != 4) {
    throw ValidationError(entity_msg("bbox must be [x,y,w,h]", entity, id));
  }
  for (const auto& v : arr) {
    if (!v.is_number()) {
      throw ValidationError(entity_msg("bbox values must be numbers", entity, id));
    }
  }
  const double x = arr[0].get<double>();
  const double y = arr[1].get<double>();
  const double w = arr[2].get<double>();
  const double h = arr[3].get<double>();
  return BBox{x, y, x + w, y + h};
}

const json& require_field(const json& obj, const char* key, const char* entity) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(std::string(entity) + " entry missing required field '" +
                          key + "'");
  }
  return *it;
}

template <typename T>
T get_number(const json& obj, const char* key, const char* entity) {
  const json& v = require_field(obj, key, entity);
  if (!v.is_number()) {
    throw ValidationError(std::string(entity) + " field '" + key +
                          "' must be a number");
  }
  return v.get<T>();
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
}

}  // namespace

Dataset::Dataset(std::vector<ImageRecord> images,
                 std::vector<Annotation> annotations,
                 std::vector<Category> categories)
    : images_(std::move(images)),
      annotations_(std::move(annotations)),
      categories_(std::move(categories)) {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    const ImageRecord& im = images_[i];
    if (im.width < 1 || im.height < 1) {
      throw ValidationError(entity_msg("image dimensions must be >= 1", "image", im.id));
    }
    if (!image_pos_.emplace(im.id, i).second) {
      throw ValidationError(entity_msg("duplicate id", "image", im.id));
    }
  }
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    const Category& c = categories_[i];
    if (c.supercategory.empty()) {
      throw ValidationError(entity_msg("supercategory must be non-empty", "category", c.id));
    }
    if (!category_pos_.emplace(c.id, i).second) {
      throw ValidationError(entity_msg("duplicate id", "category", c.id));
    }
  }
  for (std::size_t i = 0; i < annotations_.size(); ++i) {
    const Annotation& a = annotations_[i];
    if (!annotation_pos_.emplace(a.id, i).second) {
      throw ValidationError(entity_msg("duplicate id", "annotation", a.id));
    }
    if (!image_pos_.count(a.image_id)) {
      throw ValidationError(entity_msg("annotation references unknown image_id",
                                       "annotation", a.id));
    }
    if (!category_pos_.count(a.category_id)) {
      throw ValidationError(entity_msg("annotation references unknown category_id",
                                       "annotation", a.id));
    }
    if (!a.bbox.valid()) {
      throw ValidationError(entity_msg("bbox must have positive width and height",
                                       "annotation", a.id));
    }
    if (a.area < 0.0 || (!a.iscrowd && a.area <= 0.0)) {
      throw ValidationError(entity_msg("area must be > 0 for non-crowd annotations",
                                       "annotation", a.id));
    }
    anns_by_image_[a.image_id].push_back(i);
    const std::string& sc =
        categories_[category_pos_.at(a.category_id)].supercategory;
    supercat_images_[sc].insert(a.image_id);
    if (!a.iscrowd) supercat_images_noncrowd_[sc].insert(a.image_id);
  }
}

const ImageRecord* Dataset::find_image(std::int64_t id) const {
  const auto it = image_pos_.find(id);
  return it == image_pos_.end() ? nullptr : &images_[it->second];
}

const Category* Dataset::find_category(std::int64_t id) const {
  const auto it = category_pos_.find(id);
  return it == category_pos_.end() ? nullptr : &categories_[it->second];
}

const Annotation* Dataset::find_annotation(std::int64_t id) const {
  const auto it = annotation_pos_.find(id);
  return it == annotation_pos_.end() ? nullptr : &annotations_[it->second];
}

std::vector<const Annotation*> Dataset::annotations_of(
    std::int64_t image_id) const {
  std::vector<const Annotation*> out;
  const auto it = anns_by_image_.find(image_id);
  if (it == anns_by_image_.end()) return out;
  out.reserve(it->second.size());
  for (std::size_t pos : it->second) out.push_back(&annotations_[pos]);
  return out;
}

DetectionSet::DetectionSet(std::vector<Detection> detections, std::string tag)
    : detections_(std::move(detections)), tag_(std::move(tag)) {
  for (std::size_t i = 0; i < detections_.size(); ++i) {
    by_image_[detections_[i].image_id].push_back(i);
  }
}

std::vector<std::int64_t> DetectionSet::image_ids() const {
  std::vector<std::int64_t> ids;
  ids.reserve(by_image_.size());
  for (const auto& [id, _] : by_image_) ids.push_back(id);
  return ids;
}

std::vector<const Detection*> DetectionSet::for_image(
    std::int64_t image_id) const {
  std::vector<const Detection*> out;
  const auto it = by_image_.find(image_id);
  if (it == by_image_.end()) return out;
  out.reserve(it->second.size());
  for (std::size_t pos : it->second) out.push_back(&detections_[pos]);
  return out;
}

Dataset parse_dataset(std::string_view json_text) {
  const json doc = parse_document(json_text);
  if (!doc.is_object()) {
    throw ValidationError("annotation document must be a JSON object");
  }

  std::vector<ImageRecord> images;
  std::vector<Annotation> annotations;
  std::vector<Category> categories;

  for (const char* key : {"images", "annotations", "categories"}) {
    if (!doc.contains(key) || !doc.at(key).is_array()) {
      throw ValidationError(std::string("annotation document missing array '") +
                            key + "'");
    }
  }

  try {
    for (const json& j : doc.at("images")) {
      ImageRecord im;
      im.id = get_number<std::int64_t>(j, "id", "image");
      im.file_name = require_field(j, "file_name", "image").get<std::string>();
      im.width = get_number<int>(j, "width", "image");
      im.height = get_number<int>(j, "height", "image");
      images.push_back(std::move(im));
    }
    for (const json& j : doc.at("categories")) {
      Category c;
      c.id = get_number<std::int64_t>(j, "id", "category");
      c.name = require_field(j, "name", "category").get<std::string>();
      c.supercategory =
          require_field(j, "supercategory", "category").get<std::string>();
      categories.push_back(std::move(c));
    }
    for (const json& j : doc.at("annotations")) {
      Annotation a;
      a.id = get_number<std::int64_t>(j, "id", "annotation");
      a.image_id = get_number<std::int64_t>(j, "image_id", "annotation");
      a.category_id = get_number<std::int64_t>(j, "category_id", "annotation");
      a.bbox = bbox_from_xywh(require_field(j, "bbox", "annotation"),
                              "annotation", a.id);
      const auto crowd = j.find("iscrowd");
      if (crowd != j.end()) {
        a.iscrowd = crowd->is_boolean() ? crowd->get<bool>()
                                        : crowd->get<int>() != 0;
      }
      a.area = j.contains("area") ? j.at("area").get<double>() : a.bbox.area();
      annotations.push_back(std::move(a));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("annotation document field error: ") +
                          e.what());
  }

  return Dataset(std::move(images), std::move(annotations),
                 std::move(categories));
}

DetectionSet parse_detections(std::string_view json_text,
                              const Dataset& dataset) {
  const json doc = parse_document(json_text);
  if (!doc.is_array()) {
    throw ValidationError("results document must be a JSON array");
  }

  std::vector<Detection> dets;
  dets.reserve(doc.size());
  try {
    for (const json& j : doc) {
      Detection d;
      d.image_id = get_number<std::int64_t>(j, "image_id", "result");
      d.category_id = get_number<std::int64_t>(j, "category_id", "result");
      if (!dataset.find_image(d.image_id)) {
        throw ValidationError("result references unknown image_id " +
                              std::to_string(d.image_id));
      }
      if (!dataset.find_category(d.category_id)) {
        throw ValidationError("result references unknown category_id " +
                              std::to_string(d.category_id));
      }
      d.bbox = bbox_from_xywh(require_field(j, "bbox", "result"), "result",
                              d.image_id);
      if (!d.bbox.valid()) {
        throw ValidationError("result bbox must have positive width and height");
      }
      d.score = get_number<double>(j, "score", "result");
      if (!(d.score > 0.0 && d.score <= 1.0)) {
        throw ValidationError("result score " + std::to_string(d.score) +
                              " outside (0, 1]");
      }
      dets.push_back(std::move(d));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("results document field error: ") +
                          e.what());
  }
  return DetectionSet(std::move(dets));
}

std::string write_dataset(const Dataset& dataset) {
  json doc;
  doc["images"] = json::array();
  for (const ImageRecord& im : dataset.images()) {
    doc["images"].push_back(json{{"id", im.id},
                                 {"file_name", im.file_name},
                                 {"width", im.width},
                                 {"height", im.height}});
  }
  doc["annotations"] = json::array();
  for (const Annotation& a : dataset.annotations()) {
    doc["annotations"].push_back(json{{"id", a.id},
                                      {"image_id", a.image_id},
                                      {"category_id", a.category_id},
                                      {"bbox", bbox_to_xywh(a.bbox)},
                                      {"area", a.area},
                                      {"iscrowd", a.iscrowd ? 1 : 0}});
  }
  doc["categories"] = json::array();
  for (const Category& c : dataset.categories()) {
    doc["categories"].push_back(json{{"id", c.id},
                                     {"name", c.name},
                                     {"supercategory", c.supercategory}});
  }
  return doc.dump(2) + "\n";
}

std::string write_detections(const DetectionSet& detections) {
  json doc = json::array();
  for (const Detection& d : detections.detections()) {
    doc.push_back(json{{"image_id", d.image_id},
                       {"category_id", d.category_id},
                       {"bbox", bbox_to_xywh(d.bbox)},
                       {"score", d.score}});
  }
  return doc.dump(2) + "\n";
}

std::set<std::int64_t> supercategory_candidates(
    const Dataset& dataset, const std::set<std::string>& supercats) {
  std::set<std::int64_t> out;
  const auto& index = dataset.images_by_supercategory_noncrowd();
  for (const std::string& sc : supercats) {
    const auto it = index.find(sc);
    if (it == index.end()) continue;  // unknown names contribute nothing
    out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

}  // namespace detkit
