#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "detkit/coco.hpp"
#include "detkit/rng.hpp"

namespace detkit {

enum class AugmentMode { stitcher, mosaic, mixed };
enum class SelectionMode { random, supercategory };

AugmentMode augment_mode_from_string(const std::string& name);
SelectionMode selection_mode_from_string(const std::string& name);
std::string to_string(AugmentMode mode);
std::string to_string(SelectionMode mode);

struct AugmentConfig {
  AugmentMode mode = AugmentMode::mosaic;
  SelectionMode selection = SelectionMode::random;
  int canvas_width = 1333;
  int canvas_height = 800;
  double center_jitter_lo = 0.25;  // split center as a fraction of the canvas
  double center_jitter_hi = 0.75;
  double tile_scale_lo = 0.5;  // per-tile resize factor range
  double tile_scale_hi = 1.5;
  double min_visible_fraction = 0.1;
  std::uint64_t seed = 0;
};

// Throws ValidationError when a field is out of range.
void validate(const AugmentConfig& cfg);

// One source image placed onto the canvas. `map` is exactly the affine
// transform sending source_crop corners onto dest_rect corners.
struct TilePlacement {
  std::int64_t source_image_id = 0;
  BBox source_crop;  // source pixel coordinates
  BBox dest_rect;    // canvas pixel coordinates
  AffineMap2D map;
};

struct CompositeAnnotation {
  std::int64_t source_annotation_id = 0;
  std::int64_t category_id = 0;
  BBox bbox;           // canvas coordinates
  int tile_index = 0;  // 0 TL, 1 TR, 2 BL, 3 BR
};

// A 2x2 composite: the four dest_rects partition the canvas exactly and
// every annotation lies within its tile.
struct CompositeSample {
  int canvas_width = 0;
  int canvas_height = 0;
  std::array<TilePlacement, 4> tiles;  // TL, TR, BL, BR
  std::vector<CompositeAnnotation> annotations;
  AugmentMode mode_used = AugmentMode::stitcher;
  bool sc_fallback = false;  // supercategory pool was short for this group
};

struct SampledGroup {
  std::array<std::int64_t, 4> ids{};  // query first
  bool fallback_used = false;
};

// Pick the four source images. Random mode draws uniformly without
// replacement from images with at least one non-crowd annotation. In
// supercategory mode the query is drawn first and the three companions come
// from images sharing one of its supercategories; a short candidate pool is
// topped up from the remaining eligible images and flagged as fallback.
SampledGroup sample_group(const Dataset& dataset, SelectionMode selection,
                          Rng& rng);

// One source image plus its non-crowd annotations.
struct SourceTile {
  const ImageRecord* image = nullptr;
  std::vector<const Annotation*> annotations;
};

// Equal quadrants, each filled by a whole source image (aspect distortion
// permitted). Canvas dimensions must be even and >= 2.
CompositeSample compose_stitcher(const std::array<SourceTile, 4>& sources,
                                 int canvas_width, int canvas_height,
                                 double min_visible_fraction);

// Jittered center split; each tile shows a random crop of its source taken
// at a random scale. Annotations are clipped to the crop and kept when the
// visible fraction reaches min_visible_fraction.
CompositeSample compose_mosaic(const std::array<SourceTile, 4>& sources,
                               int canvas_width, int canvas_height,
                               const AugmentConfig& cfg, Rng& rng);

struct AugmentResult {
  Dataset dataset;  // composite image records + remapped annotations
  std::vector<CompositeSample> samples;
  int fallback_count = 0;
};

// Generate `count` composites. Deterministic for a given (config.seed,
// dataset, config): composite i uses the RNG stream (seed, i), so distinct
// composites may be generated in parallel.
AugmentResult generate_augmented_dataset(const Dataset& dataset,
                                         const AugmentConfig& cfg, int count,
                                         int workers = 1);

// Multi-scale training size: shorter-edge target drawn uniformly from the
// integer range, longer cap fixed.
ScaleSpec multiscale_train_size(int shorter_min, int shorter_max,
                                int longer_cap, Rng& rng);

}  // namespace detkit
