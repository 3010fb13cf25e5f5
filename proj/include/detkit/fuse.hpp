#pragma once

#include <vector>

#include "detkit/coco.hpp"
#include "detkit/suppress.hpp"

namespace detkit {

// Detections produced at one test scale, in resized-image coordinates.
struct ScaleRun {
  ScaleSpec scale_spec;
  DetectionSet detections;
  bool flipped = false;
};

// Invert the test-time resize (and optional horizontal flip) so boxes land
// in original image coordinates, clipped to the image bounds.
DetectionSet map_to_original(const ScaleRun& run, const Dataset& dataset);

// Multi-scale test fusion: map every run back to original coordinates,
// concatenate per image and suppress. Soft-NMS (gaussian) is the intended
// method for this path.
DetectionSet fuse_multiscale(const std::vector<ScaleRun>& runs,
                             const Dataset& dataset,
                             const SuppressionConfig& cfg);

// Multi-model ensembling over sets already in original coordinates.
// TkV is the intended method for this path.
DetectionSet ensemble_models(const std::vector<DetectionSet>& sets,
                             const SuppressionConfig& cfg);

}  // namespace detkit
