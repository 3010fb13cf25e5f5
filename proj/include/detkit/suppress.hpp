#pragma once

#include <functional>
#include <string>
#include <vector>

#include "detkit/coco.hpp"

namespace detkit {

enum class SuppressMethod { hard, soft_linear, soft_gaussian, tkv };

SuppressMethod suppress_method_from_string(const std::string& name);
std::string to_string(SuppressMethod method);

struct SuppressionConfig {
  SuppressMethod method = SuppressMethod::hard;
  double iou_threshold = 0.5;  // Nt
  double sigma = 0.5;          // gaussian decay
  int k = 5;                   // TkV votes per cluster
  double score_floor = 0.001;  // soft-NMS drop threshold
  int max_per_image = 100;
};

// All per-class functions expect detections of a single image and class.
// Ties in score are broken by ascending input index, so results are
// deterministic and permutation-invariant up to that tie-break.

// Greedy suppression: keep the best-scored box, drop everything overlapping
// it with IoU > Nt, repeat. Kept boxes retain their input scores.
std::vector<Detection> hard_nms(const std::vector<Detection>& dets,
                                const SuppressionConfig& cfg);

// Score-decay suppression. Linear: s *= 1 - iou when iou > Nt. Gaussian:
// s *= exp(-iou^2 / sigma) for every overlap regardless of Nt. Boxes whose
// score falls below the floor are dropped.
std::vector<Detection> soft_nms(const std::vector<Detection>& dets,
                                const SuppressionConfig& cfg);

// The soft-NMS engine with a caller-supplied decay: each surviving box's
// score is multiplied by decay(iou(frozen, box)). A step decay
// (iou > Nt ? 0 : 1) makes this reproduce hard_nms exactly.
std::vector<Detection> soft_nms_with_decay(
    const std::vector<Detection>& dets,
    const std::function<double(double)>& decay, double score_floor,
    int max_per_image);

// Top-k voting: cluster greedily as in hard NMS, then replace each cluster's
// box by the score-weighted average of its top-k members' coordinates.
// Output score is the cluster maximum.
std::vector<Detection> tkv_nms(const std::vector<Detection>& dets,
                               const SuppressionConfig& cfg);

// Per-class dispatch over all detections of one image: partition by
// category, run the configured method, concatenate, sort by score and
// truncate to max_per_image.
std::vector<Detection> suppress_image(const std::vector<Detection>& dets,
                                      const SuppressionConfig& cfg);

}  // namespace detkit
