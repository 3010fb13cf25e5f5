#include "detkit/augment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "detkit/errors.hpp"
#include "detkit/util.hpp"

namespace detkit {

namespace {

// Clip to the crop, map to the tile, keep when enough of the box survives.
// The retained fraction is measured against the full source box; the
// transformed box must additionally keep both sides >= 2 canvas pixels.
void append_tile_annotations(CompositeSample& sample, int tile_index,
                             const std::vector<const Annotation*>& anns,
                             double min_visible_fraction) {
  const TilePlacement& tile = sample.tiles[static_cast<std::size_t>(tile_index)];
  for (const Annotation* ann : anns) {
    const auto clipped = clip(ann->bbox, tile.source_crop);
    if (!clipped) continue;
    const double fraction = clipped->area() / ann->bbox.area();
    if (fraction < min_visible_fraction) continue;
    const BBox mapped = affine_map(*clipped, tile.map);
    if (mapped.width() < 2.0 || mapped.height() < 2.0) continue;
    sample.annotations.push_back(
        CompositeAnnotation{ann->id, ann->category_id, mapped, tile_index});
  }
}

std::vector<std::int64_t> eligible_images(const Dataset& dataset) {
  std::vector<std::int64_t> out;
  for (const ImageRecord& image : dataset.images()) {
    for (const Annotation* ann : dataset.annotations_of(image.id)) {
      if (!ann->iscrowd) {
        out.push_back(image.id);
        break;
      }
    }
  }
  return out;
}

// Draw `k` elements without replacement (partial Fisher-Yates).
template <typename T>
std::vector<T> draw_without_replacement(std::vector<T> pool, std::size_t k,
                                        Rng& rng) {
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(
        static_cast<std::int64_t>(i), static_cast<std::int64_t>(pool.size()) - 1));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

std::string composite_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "composite_%06d.png", index);
  return buf;
}

}  // namespace

AugmentMode augment_mode_from_string(const std::string& name) {
  if (name == "stitcher") return AugmentMode::stitcher;
  if (name == "mosaic") return AugmentMode::mosaic;
  if (name == "mixed") return AugmentMode::mixed;
  throw ValidationError("unknown augment mode '" + name + "'");
}

SelectionMode selection_mode_from_string(const std::string& name) {
  if (name == "random") return SelectionMode::random;
  if (name == "supercategory") return SelectionMode::supercategory;
  throw ValidationError("unknown selection mode '" + name + "'");
}

std::string to_string(AugmentMode mode) {
  switch (mode) {
    case AugmentMode::stitcher: return "stitcher";
    case AugmentMode::mosaic: return "mosaic";
    case AugmentMode::mixed: return "mixed";
  }
  return "?";
}

std::string to_string(SelectionMode mode) {
  return mode == SelectionMode::random ? "random" : "supercategory";
}

void validate(const AugmentConfig& cfg) {
  if (cfg.canvas_width < 2 || cfg.canvas_height < 2) {
    throw ValidationError("canvas dimensions must be >= 2");
  }
  if (!(cfg.tile_scale_lo > 0.0 && cfg.tile_scale_lo <= cfg.tile_scale_hi &&
        cfg.tile_scale_hi <= 4.0)) {
    throw ValidationError("tile scale range must lie within (0, 4]");
  }
  if (!(cfg.center_jitter_lo >= 0.25 &&
        cfg.center_jitter_lo <= cfg.center_jitter_hi &&
        cfg.center_jitter_hi <= 0.75)) {
    throw ValidationError("center jitter range must lie within [0.25, 0.75]");
  }
  if (!(cfg.min_visible_fraction > 0.0 && cfg.min_visible_fraction <= 1.0)) {
    throw ValidationError("min_visible_fraction must be in (0, 1]");
  }
}

SampledGroup sample_group(const Dataset& dataset, SelectionMode selection,
                          Rng& rng) {
  const auto eligible = eligible_images(dataset);
  if (eligible.size() < 4) {
    throw ValidationError(
        "insufficient data: need >= 4 images with non-crowd annotations, have " +
        std::to_string(eligible.size()));
  }

  SampledGroup group;
  if (selection == SelectionMode::random) {
    const auto picked = draw_without_replacement(eligible, 4, rng);
    std::copy(picked.begin(), picked.end(), group.ids.begin());
    return group;
  }

  const std::int64_t query = eligible[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(eligible.size()) - 1))];
  group.ids[0] = query;

  std::set<std::string> supercats;
  for (const Annotation* ann : dataset.annotations_of(query)) {
    if (ann->iscrowd) continue;
    supercats.insert(dataset.find_category(ann->category_id)->supercategory);
  }

  auto pool_set = supercategory_candidates(dataset, supercats);
  pool_set.erase(query);
  std::vector<std::int64_t> pool(pool_set.begin(), pool_set.end());

  std::vector<std::int64_t> companions;
  if (pool.size() >= 3) {
    companions = draw_without_replacement(std::move(pool), 3, rng);
  } else {
    companions = pool;
    group.fallback_used = true;
    std::vector<std::int64_t> rest;
    for (std::int64_t id : eligible) {
      if (id == query) continue;
      if (std::find(companions.begin(), companions.end(), id) !=
          companions.end()) {
        continue;
      }
      rest.push_back(id);
    }
    const auto fill =
        draw_without_replacement(std::move(rest), 3 - companions.size(), rng);
    companions.insert(companions.end(), fill.begin(), fill.end());
  }
  std::copy(companions.begin(), companions.end(), group.ids.begin() + 1);
  return group;
}

CompositeSample compose_stitcher(const std::array<SourceTile, 4>& sources,
                                 int canvas_width, int canvas_height,
                                 double min_visible_fraction) {
  if (canvas_width < 2 || canvas_height < 2 || canvas_width % 2 != 0 ||
      canvas_height % 2 != 0) {
    throw ValidationError("stitcher canvas dimensions must be even and >= 2");
  }
  CompositeSample sample;
  sample.canvas_width = canvas_width;
  sample.canvas_height = canvas_height;
  sample.mode_used = AugmentMode::stitcher;

  const double tw = canvas_width / 2.0;
  const double th = canvas_height / 2.0;
  const std::array<std::pair<double, double>, 4> origins = {
      {{0.0, 0.0}, {tw, 0.0}, {0.0, th}, {tw, th}}};

  for (int t = 0; t < 4; ++t) {
    const SourceTile& src = sources[static_cast<std::size_t>(t)];
    TilePlacement tile;
    tile.source_image_id = src.image->id;
    tile.source_crop = BBox{0.0, 0.0, static_cast<double>(src.image->width),
                            static_cast<double>(src.image->height)};
    const auto [ox, oy] = origins[static_cast<std::size_t>(t)];
    tile.dest_rect = BBox{ox, oy, ox + tw, oy + th};
    tile.map = map_between(tile.source_crop, tile.dest_rect);
    sample.tiles[static_cast<std::size_t>(t)] = tile;
    append_tile_annotations(sample, t, src.annotations, min_visible_fraction);
  }
  return sample;
}

CompositeSample compose_mosaic(const std::array<SourceTile, 4>& sources,
                               int canvas_width, int canvas_height,
                               const AugmentConfig& cfg, Rng& rng) {
  if (canvas_width < 2 || canvas_height < 2) {
    throw ValidationError("mosaic canvas dimensions must be >= 2");
  }
  CompositeSample sample;
  sample.canvas_width = canvas_width;
  sample.canvas_height = canvas_height;
  sample.mode_used = AugmentMode::mosaic;

  // integer split center so tiles are renderable pixel rectangles
  const double W = canvas_width;
  const double H = canvas_height;
  const double cx = std::clamp<double>(
      std::llround(W * rng.uniform(cfg.center_jitter_lo, cfg.center_jitter_hi)),
      1.0, W - 1.0);
  const double cy = std::clamp<double>(
      std::llround(H * rng.uniform(cfg.center_jitter_lo, cfg.center_jitter_hi)),
      1.0, H - 1.0);
  const std::array<BBox, 4> rects = {BBox{0.0, 0.0, cx, cy},
                                     BBox{cx, 0.0, W, cy},
                                     BBox{0.0, cy, cx, H},
                                     BBox{cx, cy, W, H}};

  for (int t = 0; t < 4; ++t) {
    const SourceTile& src = sources[static_cast<std::size_t>(t)];
    const BBox& rect = rects[static_cast<std::size_t>(t)];
    const double sw = src.image->width;
    const double sh = src.image->height;

    // a crop of tile_size / s must fit inside the source; infeasible draws
    // are repaired to the minimal feasible scale
    double s = rng.uniform(cfg.tile_scale_lo, cfg.tile_scale_hi);
    s = std::max({s, rect.width() / sw, rect.height() / sh});
    const double crop_w = std::min(rect.width() / s, sw);
    const double crop_h = std::min(rect.height() / s, sh);
    const double crop_x = rng.uniform(0.0, sw - crop_w);
    const double crop_y = rng.uniform(0.0, sh - crop_h);

    TilePlacement tile;
    tile.source_image_id = src.image->id;
    tile.source_crop = BBox{crop_x, crop_y, crop_x + crop_w, crop_y + crop_h};
    tile.dest_rect = rect;
    tile.map = map_between(tile.source_crop, tile.dest_rect);
    sample.tiles[static_cast<std::size_t>(t)] = tile;
    append_tile_annotations(sample, t, src.annotations,
                            cfg.min_visible_fraction);
  }
  return sample;
}

AugmentResult generate_augmented_dataset(const Dataset& dataset,
                                         const AugmentConfig& cfg, int count,
                                         int workers) {
  validate(cfg);
  if (count < 0) throw ValidationError("count must be >= 0");

  std::vector<CompositeSample> samples(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(count), workers, [&](std::size_t i) {
    Rng rng = Rng::for_stream(cfg.seed, i);
    AugmentMode mode = cfg.mode;
    if (mode == AugmentMode::mixed) {
      mode = rng.uniform() < 0.5 ? AugmentMode::stitcher : AugmentMode::mosaic;
    }
    const SampledGroup group = sample_group(dataset, cfg.selection, rng);

    std::array<SourceTile, 4> sources;
    for (int t = 0; t < 4; ++t) {
      const std::int64_t id = group.ids[static_cast<std::size_t>(t)];
      SourceTile src;
      src.image = dataset.find_image(id);
      for (const Annotation* ann : dataset.annotations_of(id)) {
        if (!ann->iscrowd) src.annotations.push_back(ann);
      }
      sources[static_cast<std::size_t>(t)] = std::move(src);
    }

    CompositeSample sample;
    if (mode == AugmentMode::stitcher) {
      // the stitcher needs even dimensions; round the canvas down
      sample = compose_stitcher(sources, cfg.canvas_width - cfg.canvas_width % 2,
                                cfg.canvas_height - cfg.canvas_height % 2,
                                cfg.min_visible_fraction);
    } else {
      sample = compose_mosaic(sources, cfg.canvas_width, cfg.canvas_height, cfg,
                              rng);
    }
    sample.sc_fallback = group.fallback_used;
    samples[i] = std::move(sample);
  });

  AugmentResult result;
  std::vector<ImageRecord> images;
  std::vector<Annotation> annotations;
  std::int64_t next_ann_id = 1;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const CompositeSample& s = samples[i];
    const auto image_id = static_cast<std::int64_t>(i) + 1;
    images.push_back(ImageRecord{image_id,
                                 composite_file_name(static_cast<int>(i) + 1),
                                 s.canvas_width, s.canvas_height});
    for (const CompositeAnnotation& ca : s.annotations) {
      annotations.push_back(Annotation{next_ann_id++, image_id, ca.category_id,
                                       ca.bbox, ca.bbox.area(), false});
    }
    if (s.sc_fallback) ++result.fallback_count;
  }
  result.dataset = Dataset(std::move(images), std::move(annotations),
                           dataset.categories());
  result.samples = std::move(samples);
  return result;
}

ScaleSpec multiscale_train_size(int shorter_min, int shorter_max,
                                int longer_cap, Rng& rng) {
  if (shorter_min < 1 || shorter_min > shorter_max ||
      shorter_max > longer_cap) {
    throw ValidationError("invalid multi-scale training range");
  }
  return ScaleSpec{static_cast<int>(rng.uniform_int(shorter_min, shorter_max)),
                   longer_cap};
}

}  // namespace detkit
