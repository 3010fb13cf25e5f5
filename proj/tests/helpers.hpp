#pragma once

#include <string>
#include <vector>

#include "detkit/coco.hpp"
#include "detkit/io_util.hpp"
#include "detkit/rng.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
  return std::string(DETKIT_TEST_DATA_DIR) + "/" + name;
}

inline detkit::Dataset load_fixture() {
  return detkit::parse_dataset(detkit::read_file(data_path("fixture16.json")));
}

// Ground truth re-emitted as perfect detections (non-crowd, score 1).
inline detkit::DetectionSet perfect_detections(const detkit::Dataset& gt) {
  std::vector<detkit::Detection> dets;
  for (const detkit::Annotation& a : gt.annotations()) {
    if (a.iscrowd) continue;
    dets.push_back(detkit::Detection{a.image_id, a.category_id, a.bbox, 1.0});
  }
  return detkit::DetectionSet(std::move(dets));
}

// Incremental dataset builder for small hand-made cases.
class DatasetBuilder {
 public:
  DatasetBuilder& image(std::int64_t id, int w, int h) {
    images_.push_back({id, "img_" + std::to_string(id) + ".png", w, h});
    return *this;
  }
  DatasetBuilder& category(std::int64_t id, const std::string& name,
                           const std::string& super) {
    categories_.push_back({id, name, super});
    return *this;
  }
  // area < 0 means "use the box area"
  DatasetBuilder& annotation(std::int64_t id, std::int64_t image_id,
                             std::int64_t category_id, detkit::BBox box,
                             bool crowd = false, double area = -1.0) {
    annotations_.push_back(
        {id, image_id, category_id, box, area < 0.0 ? box.area() : area, crowd});
    return *this;
  }
  detkit::Dataset build() const {
    return detkit::Dataset(images_, annotations_, categories_);
  }

 private:
  std::vector<detkit::ImageRecord> images_;
  std::vector<detkit::Annotation> annotations_;
  std::vector<detkit::Category> categories_;
};

inline bool same_detection(const detkit::Detection& a,
                           const detkit::Detection& b, double tol = 0.0) {
  return a.image_id == b.image_id && a.category_id == b.category_id &&
         std::abs(a.bbox.x1 - b.bbox.x1) <= tol &&
         std::abs(a.bbox.y1 - b.bbox.y1) <= tol &&
         std::abs(a.bbox.x2 - b.bbox.x2) <= tol &&
         std::abs(a.bbox.y2 - b.bbox.y2) <= tol &&
         std::abs(a.score - b.score) <= tol;
}

inline bool same_detections(const std::vector<detkit::Detection>& a,
                            const std::vector<detkit::Detection>& b,
                            double tol = 0.0) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_detection(a[i], b[i], tol)) return false;
  }
  return true;
}

}  // namespace testutil
