#pragma once

#include <optional>
#include <vector>

#include "detkit/coco.hpp"

namespace detkit {

// Half-open area interval [lo, hi) in pixels^2.
struct AreaRange {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double area) const { return area >= lo && area < hi; }
};

struct EvalConfig {
  std::vector<double> iou_thresholds;  // strictly increasing, in (0, 1]
  std::vector<double> recall_points;   // 101 uniform values in [0, 1]
  int max_dets = 100;                  // per image and class
  double small_max = 32.0 * 32.0;      // small/medium area cut
  double medium_max = 96.0 * 96.0;     // medium/large area cut

  // 10 IoU thresholds 0.50:0.05:0.95, 101 recall points, maxDets 100.
  static EvalConfig coco_default();

  AreaRange range_all() const;
  AreaRange range_small() const;
  AreaRange range_medium() const;
  AreaRange range_large() const;
};

// The six headline metrics. A metric is absent when its stratum contains no
// ground truth anywhere in the dataset.
struct EvalSummary {
  std::optional<double> ap;
  std::optional<double> ap50;
  std::optional<double> ap75;
  std::optional<double> ap_small;
  std::optional<double> ap_medium;
  std::optional<double> ap_large;
};

// Outcome of greedy matching for one image and class at one IoU threshold.
// Entries are aligned with the score-sorted detections (up to max_dets).
struct MatchResult {
  std::vector<double> scores;
  std::vector<bool> matched;  // true = matched a counted ground truth
  std::vector<bool> ignored;  // matched a crowd / out-of-range GT, or is an
                              // unmatched detection outside the area range
  int num_gt = 0;             // non-ignored ground truth in this image/class
};

// Greedy COCO matching. `dets` must be sorted by (score desc, input index
// asc); crowd ground truth uses intersection-over-detection-area overlap and
// may absorb any number of detections, each becoming ignored.
MatchResult match_image_class(const std::vector<const Annotation*>& gt,
                              const std::vector<const Detection*>& dets,
                              double iou_thr, const AreaRange& range,
                              int max_dets);

// One detection's contribution to a class-level curve.
struct ScoredMatch {
  double score = 0.0;
  bool matched = false;
  std::size_t order = 0;  // global input order, breaks score ties
};

// Interpolated precision sampled at the recall points: detections sorted by
// (score desc, order asc), cumulative TP/FP, precision envelope, then the
// value at the first raw point with recall >= r (0 beyond max recall).
// nullopt when gt_count == 0.
std::optional<std::vector<double>> precision_recall_curve(
    std::vector<ScoredMatch> matches, long gt_count,
    const std::vector<double>& recall_points);

// Full protocol summary over a ground-truth dataset and a detection set.
EvalSummary coco_summary(const Dataset& gt, const DetectionSet& dets,
                         const EvalConfig& cfg);

}  // namespace detkit
