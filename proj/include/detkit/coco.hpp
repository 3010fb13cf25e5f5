#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "detkit/geometry.hpp"

namespace detkit {

struct ImageRecord {
  std::int64_t id = 0;
  std::string file_name;
  int width = 0;   // >= 1
  int height = 0;  // >= 1

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct Category {
  std::int64_t id = 0;
  std::string name;
  std::string supercategory;  // non-empty

  friend bool operator==(const Category&, const Category&) = default;
};

struct Annotation {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  std::int64_t category_id = 0;
  BBox bbox;          // corner form; files use x,y,w,h
  double area = 0.0;  // the file's own area field, not recomputed
  bool iscrowd = false;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct Detection {
  std::int64_t image_id = 0;
  std::int64_t category_id = 0;
  BBox bbox;
  double score = 0.0;  // in (0, 1]

  friend bool operator==(const Detection&, const Detection&) = default;
};

// Parsed COCO-style corpus. Immutable after construction; the derived
// indices are built once and stay consistent with the flat lists.
class Dataset {
 public:
  Dataset() = default;

  // Validates invariants (unique ids, resolvable references, positive box
  // sizes, area > 0 for non-crowd) and builds all indices.
  // Throws ValidationError on violation.
  Dataset(std::vector<ImageRecord> images, std::vector<Annotation> annotations,
          std::vector<Category> categories);

  const std::vector<ImageRecord>& images() const { return images_; }
  const std::vector<Annotation>& annotations() const { return annotations_; }
  const std::vector<Category>& categories() const { return categories_; }

  const ImageRecord* find_image(std::int64_t id) const;
  const Category* find_category(std::int64_t id) const;
  const Annotation* find_annotation(std::int64_t id) const;

  // Annotations of one image, in file order. Empty for unknown ids.
  std::vector<const Annotation*> annotations_of(std::int64_t image_id) const;

  // supercategory -> images with at least one annotation in it (crowd
  // included). See supercategory_candidates for the sampling view.
  const std::map<std::string, std::set<std::int64_t>>& images_by_supercategory()
      const {
    return supercat_images_;
  }

  // Same index restricted to non-crowd annotations.
  const std::map<std::string, std::set<std::int64_t>>&
  images_by_supercategory_noncrowd() const {
    return supercat_images_noncrowd_;
  }

 private:
  std::vector<ImageRecord> images_;
  std::vector<Annotation> annotations_;
  std::vector<Category> categories_;
  std::map<std::int64_t, std::size_t> image_pos_;
  std::map<std::int64_t, std::size_t> category_pos_;
  std::map<std::int64_t, std::size_t> annotation_pos_;
  std::map<std::int64_t, std::vector<std::size_t>> anns_by_image_;
  std::map<std::string, std::set<std::int64_t>> supercat_images_;
  std::map<std::string, std::set<std::int64_t>> supercat_images_noncrowd_;
};

// Flat detections plus a per-image grouping index. Immutable after
// construction. The optional tag records provenance (model name / scale).
class DetectionSet {
 public:
  DetectionSet() = default;
  explicit DetectionSet(std::vector<Detection> detections, std::string tag = {});

  const std::vector<Detection>& detections() const { return detections_; }
  const std::string& tag() const { return tag_; }

  // Image ids with at least one detection, ascending.
  std::vector<std::int64_t> image_ids() const;

  // Detections of one image, in input order.
  std::vector<const Detection*> for_image(std::int64_t image_id) const;

 private:
  std::vector<Detection> detections_;
  std::string tag_;
  std::map<std::int64_t, std::vector<std::size_t>> by_image_;
};

// Parse a COCO annotation document. Unknown extra fields are ignored and
// annotation order is preserved. Throws ParseError (malformed JSON, with
// byte offset) or ValidationError (schema/reference/duplicate problems).
Dataset parse_dataset(std::string_view json_text);

// Parse a flat results array ([{image_id, category_id, bbox, score}, ...]).
// Scores outside (0, 1] and unresolvable references are rejected.
DetectionSet parse_detections(std::string_view json_text,
                              const Dataset& dataset);

// Serialize back to the external schema (boxes in x,y,w,h). Round-trip
// stable: parse(write(x)) is entity-by-entity equal to x.
std::string write_dataset(const Dataset& dataset);
std::string write_detections(const DetectionSet& detections);

// Images having >= 1 non-crowd annotation whose category's supercategory is
// in `supercats`. Unknown names contribute nothing.
std::set<std::int64_t> supercategory_candidates(
    const Dataset& dataset, const std::set<std::string>& supercats);

}  // namespace detkit
