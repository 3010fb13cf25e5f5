#include "detkit/fuse.hpp"

#include <algorithm>
#include <map>

#include "detkit/errors.hpp"

namespace detkit {

DetectionSet map_to_original(const ScaleRun& run, const Dataset& dataset) {
  std::vector<Detection> out;
  out.reserve(run.detections.detections().size());
  for (const Detection& d : run.detections.detections()) {
    const ImageRecord* image = dataset.find_image(d.image_id);
    if (!image) {
      throw ValidationError("scale run references unknown image_id " +
                            std::to_string(d.image_id));
    }
    const double scale =
        resize_for_scale(image->width, image->height, run.scale_spec).scale;
    BBox b{d.bbox.x1 / scale, d.bbox.y1 / scale, d.bbox.x2 / scale,
           d.bbox.y2 / scale};
    if (run.flipped) b = hflip_box(b, image->width);
    const auto clipped = clip(
        b, BBox{0.0, 0.0, static_cast<double>(image->width),
                static_cast<double>(image->height)});
    if (!clipped) continue;  // fell entirely outside the image
    Detection mapped = d;
    mapped.bbox = *clipped;
    out.push_back(mapped);
  }
  return DetectionSet(std::move(out), run.detections.tag());
}

namespace {

// Concatenate per image in list order, suppress per image, and emit images
// in ascending id order.
DetectionSet merge_sets(const std::vector<DetectionSet>& sets,
                        const SuppressionConfig& cfg) {
  std::map<std::int64_t, std::vector<Detection>> per_image;
  for (const DetectionSet& set : sets) {
    for (const Detection& d : set.detections()) {
      per_image[d.image_id].push_back(d);
    }
  }
  std::vector<Detection> merged;
  for (const auto& [image_id, dets] : per_image) {
    const auto kept = suppress_image(dets, cfg);
    merged.insert(merged.end(), kept.begin(), kept.end());
  }
  return DetectionSet(std::move(merged));
}

}  // namespace

DetectionSet fuse_multiscale(const std::vector<ScaleRun>& runs,
                             const Dataset& dataset,
                             const SuppressionConfig& cfg) {
  std::vector<DetectionSet> mapped;
  mapped.reserve(runs.size());
  for (const ScaleRun& run : runs) mapped.push_back(map_to_original(run, dataset));
  return merge_sets(mapped, cfg);
}

DetectionSet ensemble_models(const std::vector<DetectionSet>& sets,
                             const SuppressionConfig& cfg) {
  return merge_sets(sets, cfg);
}

}  // namespace detkit
