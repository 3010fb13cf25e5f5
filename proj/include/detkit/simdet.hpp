#pragma once

#include <cstdint>

#include "detkit/coco.hpp"

namespace detkit {

// Error model for the synthetic detector. Scores are IoU-correlated so that
// suppression and ensembling behave the way they do on real detectors.
struct NoiseProfile {
  double jitter_sigma = 0.05;  // corner noise std as a fraction of box size
  double miss_rate = 0.0;      // probability of dropping a ground-truth box
  double fp_rate = 0.0;        // expected false positives per image (Poisson)
  double score_noise = 0.0;    // score degradation strength
  std::uint64_t seed = 0;
};

// Throws ValidationError when a field is out of range.
void validate(const NoiseProfile& profile);

// Perturb ground truth into a detection set: each non-crowd box is dropped
// with miss_rate, otherwise its corners are jittered with std
// jitter_sigma * (width or height) and clipped to the image; the score is
// clamp(iou(jittered, gt) - score_noise * |gaussian|, 0.05, 1.0). Poisson
// false positives get uniform geometry and scores in (0, 0.5]. Deterministic
// per (seed, image_id), so output is independent of worker scheduling.
DetectionSet simulate_detector(const Dataset& dataset,
                               const NoiseProfile& profile);

}  // namespace detkit
