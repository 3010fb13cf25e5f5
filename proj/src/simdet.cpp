#include "detkit/simdet.hpp"

#include <algorithm>
#include <cmath>

#include "detkit/errors.hpp"
#include "detkit/rng.hpp"

namespace detkit {

void validate(const NoiseProfile& profile) {
  if (profile.jitter_sigma < 0.0) {
    throw ValidationError("jitter_sigma must be >= 0");
  }
  if (profile.miss_rate < 0.0 || profile.miss_rate >= 1.0) {
    throw ValidationError("miss_rate must be in [0, 1)");
  }
  if (profile.fp_rate < 0.0) {
    throw ValidationError("fp_rate must be >= 0");
  }
  if (profile.score_noise < 0.0) {
    throw ValidationError("score_noise must be >= 0");
  }
}

DetectionSet simulate_detector(const Dataset& dataset,
                               const NoiseProfile& profile) {
  validate(profile);

  std::vector<Detection> dets;
  for (const ImageRecord& image : dataset.images()) {
    Rng rng = Rng::for_stream(profile.seed,
                              static_cast<std::uint64_t>(image.id));
    const BBox bounds{0.0, 0.0, static_cast<double>(image.width),
                      static_cast<double>(image.height)};

    for (const Annotation* ann : dataset.annotations_of(image.id)) {
      if (ann->iscrowd) continue;
      if (rng.uniform() < profile.miss_rate) continue;

      const double sx = profile.jitter_sigma * ann->bbox.width();
      const double sy = profile.jitter_sigma * ann->bbox.height();
      BBox b{ann->bbox.x1 + rng.gaussian() * sx,
             ann->bbox.y1 + rng.gaussian() * sy,
             ann->bbox.x2 + rng.gaussian() * sx,
             ann->bbox.y2 + rng.gaussian() * sy};
      const double penalty = profile.score_noise * std::abs(rng.gaussian());

      b.x1 = std::clamp(b.x1, bounds.x1, bounds.x2);
      b.x2 = std::clamp(b.x2, bounds.x1, bounds.x2);
      b.y1 = std::clamp(b.y1, bounds.y1, bounds.y2);
      b.y2 = std::clamp(b.y2, bounds.y1, bounds.y2);
      if (!b.valid()) continue;  // jittered into nothing: a miss

      Detection d;
      d.image_id = image.id;
      d.category_id = ann->category_id;
      d.bbox = b;
      d.score = std::clamp(iou(b, ann->bbox) - penalty, 0.05, 1.0);
      dets.push_back(d);
    }

    const int n_fp =
        dataset.categories().empty() ? 0 : rng.poisson(profile.fp_rate);
    for (int i = 0; i < n_fp; ++i) {
      const double w = std::max(1.0, rng.uniform(0.05, 0.5) * image.width);
      const double h = std::max(1.0, rng.uniform(0.05, 0.5) * image.height);
      const double x = rng.uniform(0.0, image.width - w);
      const double y = rng.uniform(0.0, image.height - h);
      const auto cat_index = static_cast<std::size_t>(rng.uniform_int(
          0, static_cast<std::int64_t>(dataset.categories().size()) - 1));
      Detection d;
      d.image_id = image.id;
      d.category_id = dataset.categories()[cat_index].id;
      d.bbox = BBox{x, y, x + w, y + h};
      d.score = 0.5 * (1.0 - rng.uniform());  // in (0, 0.5]
      dets.push_back(d);
    }
  }
  return DetectionSet(std::move(dets));
}

}  // namespace detkit
