#include "detkit/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "detkit/errors.hpp"

namespace detkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Overlap of a detection with a crowd region: intersection over the
// detection's own area, so a box fully inside the crowd scores 1.
double crowd_overlap(const BBox& det, const BBox& crowd) {
  const double ix1 = std::max(det.x1, crowd.x1);
  const double iy1 = std::max(det.y1, crowd.y1);
  const double ix2 = std::min(det.x2, crowd.x2);
  const double iy2 = std::min(det.y2, crowd.y2);
  const double iw = ix2 - ix1;
  const double ih = iy2 - iy1;
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return (iw * ih) / det.area();
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

EvalConfig EvalConfig::coco_default() {
  EvalConfig cfg;
  for (int i = 0; i < 10; ++i) cfg.iou_thresholds.push_back(0.5 + 0.05 * i);
  for (int i = 0; i <= 100; ++i) cfg.recall_points.push_back(0.01 * i);
  return cfg;
}

AreaRange EvalConfig::range_all() const { return {0.0, kInf}; }
AreaRange EvalConfig::range_small() const { return {0.0, small_max}; }
AreaRange EvalConfig::range_medium() const { return {small_max, medium_max}; }
AreaRange EvalConfig::range_large() const { return {medium_max, kInf}; }

MatchResult match_image_class(const std::vector<const Annotation*>& gt,
                              const std::vector<const Detection*>& dets,
                              double iou_thr, const AreaRange& range,
                              int max_dets) {
  MatchResult result;

  // A ground truth is ignored when it is a crowd region or its own area
  // field falls outside the range. Ignored entries sort after counted ones
  // so the greedy pass prefers real matches.
  std::vector<std::size_t> gt_order;
  std::vector<bool> gt_ignore(gt.size(), false);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    gt_ignore[i] = gt[i]->iscrowd || !range.contains(gt[i]->area);
  }
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!gt_ignore[i]) gt_order.push_back(i);
  }
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt_ignore[i]) gt_order.push_back(i);
  }
  for (bool ig : gt_ignore) {
    if (!ig) ++result.num_gt;
  }

  const std::size_t n_dets =
      std::min<std::size_t>(dets.size(), static_cast<std::size_t>(max_dets));
  std::vector<int> gt_matched(gt.size(), 0);
  result.scores.reserve(n_dets);
  result.matched.assign(n_dets, false);
  result.ignored.assign(n_dets, false);

  for (std::size_t di = 0; di < n_dets; ++di) {
    const Detection& d = *dets[di];
    result.scores.push_back(d.score);

    double best = std::min(iou_thr, 1.0 - 1e-10);
    std::ptrdiff_t match = -1;
    for (std::size_t oi = 0; oi < gt_order.size(); ++oi) {
      const std::size_t gi = gt_order[oi];
      // an already-claimed non-crowd GT is unavailable; crowds can absorb
      // any number of detections
      if (gt_matched[gi] && !gt[gi]->iscrowd) continue;
      // once a counted match exists, ignored candidates cannot improve it
      if (match >= 0 && !gt_ignore[static_cast<std::size_t>(match)] &&
          gt_ignore[gi]) {
        break;
      }
      const double v = gt[gi]->iscrowd ? crowd_overlap(d.bbox, gt[gi]->bbox)
                                       : iou(d.bbox, gt[gi]->bbox);
      if (v < best) continue;
      best = v;
      match = static_cast<std::ptrdiff_t>(gi);
    }

    if (match >= 0) {
      const auto gi = static_cast<std::size_t>(match);
      gt_matched[gi] = 1;
      if (gt_ignore[gi]) {
        result.ignored[di] = true;
      } else {
        result.matched[di] = true;
      }
    } else if (!range.contains(d.bbox.area())) {
      // unmatched and outside the stratum: not counted as a false positive
      result.ignored[di] = true;
    }
  }
  return result;
}

std::optional<std::vector<double>> precision_recall_curve(
    std::vector<ScoredMatch> matches, long gt_count,
    const std::vector<double>& recall_points) {
  if (gt_count <= 0) return std::nullopt;

  std::sort(matches.begin(), matches.end(),
            [](const ScoredMatch& a, const ScoredMatch& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.order < b.order;
            });

  std::vector<double> recall(matches.size());
  std::vector<double> precision(matches.size());
  long tp = 0;
  long fp = 0;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    matches[i].matched ? ++tp : ++fp;
    recall[i] = static_cast<double>(tp) / static_cast<double>(gt_count);
    precision[i] = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  // envelope: each point gets the best precision at equal or higher recall
  for (std::size_t i = precision.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }

  std::vector<double> out(recall_points.size(), 0.0);
  for (std::size_t ri = 0; ri < recall_points.size(); ++ri) {
    const auto it =
        std::lower_bound(recall.begin(), recall.end(), recall_points[ri]);
    if (it != recall.end()) {
      out[ri] = precision[static_cast<std::size_t>(it - recall.begin())];
    }
  }
  return out;
}

EvalSummary coco_summary(const Dataset& gt, const DetectionSet& dets,
                         const EvalConfig& cfg) {
  for (const Detection& d : dets.detections()) {
    if (!gt.find_image(d.image_id)) {
      throw ValidationError("detection references unknown image_id " +
                            std::to_string(d.image_id));
    }
    if (!gt.find_category(d.category_id)) {
      throw ValidationError("detection references unknown category_id " +
                            std::to_string(d.category_id));
    }
  }

  // per (category, image): ground truth in file order, detections sorted by
  // (score desc, global input order asc)
  struct DetRef {
    const Detection* det;
    std::size_t order;
  };
  std::map<std::int64_t, std::map<std::int64_t, std::vector<const Annotation*>>>
      gt_by_cat;
  std::map<std::int64_t, std::map<std::int64_t, std::vector<DetRef>>> det_by_cat;
  for (const Annotation& a : gt.annotations()) {
    gt_by_cat[a.category_id][a.image_id].push_back(&a);
  }
  for (std::size_t i = 0; i < dets.detections().size(); ++i) {
    const Detection& d = dets.detections()[i];
    det_by_cat[d.category_id][d.image_id].push_back({&d, i});
  }
  for (auto& [cat, per_image] : det_by_cat) {
    for (auto& [img, refs] : per_image) {
      std::stable_sort(refs.begin(), refs.end(),
                       [](const DetRef& a, const DetRef& b) {
                         return a.det->score > b.det->score;
                       });
    }
  }

  const std::array<AreaRange, 4> ranges = {cfg.range_all(), cfg.range_small(),
                                           cfg.range_medium(), cfg.range_large()};
  const std::size_t n_thr = cfg.iou_thresholds.size();

  // ap[range][thr] collects per-class APs; classes with no counted GT in the
  // stratum are excluded rather than scored 0
  std::array<std::vector<std::vector<double>>, 4> ap;
  for (auto& per_range : ap) per_range.assign(n_thr, {});

  for (const Category& cat : gt.categories()) {
    const auto git = gt_by_cat.find(cat.id);
    const auto dit = det_by_cat.find(cat.id);

    // union of images with GT or detections for this class
    std::vector<std::int64_t> image_ids;
    if (git != gt_by_cat.end()) {
      for (const auto& [img, _] : git->second) image_ids.push_back(img);
    }
    if (dit != det_by_cat.end()) {
      for (const auto& [img, _] : dit->second) image_ids.push_back(img);
    }
    std::sort(image_ids.begin(), image_ids.end());
    image_ids.erase(std::unique(image_ids.begin(), image_ids.end()),
                    image_ids.end());
    if (image_ids.empty()) continue;

    static const std::vector<const Annotation*> no_gt;
    static const std::vector<DetRef> no_dets;
    for (std::size_t ri = 0; ri < ranges.size(); ++ri) {
      for (std::size_t ti = 0; ti < n_thr; ++ti) {
        long num_gt = 0;
        std::vector<ScoredMatch> matches;
        for (std::int64_t img : image_ids) {
          const auto* gts = &no_gt;
          if (git != gt_by_cat.end()) {
            const auto it = git->second.find(img);
            if (it != git->second.end()) gts = &it->second;
          }
          const auto* drefs = &no_dets;
          if (dit != det_by_cat.end()) {
            const auto it = dit->second.find(img);
            if (it != dit->second.end()) drefs = &it->second;
          }
          std::vector<const Detection*> dptrs;
          dptrs.reserve(drefs->size());
          for (const DetRef& r : *drefs) dptrs.push_back(r.det);

          const MatchResult m = match_image_class(
              *gts, dptrs, cfg.iou_thresholds[ti], ranges[ri], cfg.max_dets);
          num_gt += m.num_gt;
          for (std::size_t di = 0; di < m.scores.size(); ++di) {
            if (m.ignored[di]) continue;
            matches.push_back(
                {m.scores[di], static_cast<bool>(m.matched[di]),
                 (*drefs)[di].order});
          }
        }
        const auto curve =
            precision_recall_curve(std::move(matches), num_gt, cfg.recall_points);
        if (curve) ap[ri][ti].push_back(mean_of(*curve));
      }
    }
  }

  const auto stratum_mean = [&](std::size_t ri) -> std::optional<double> {
    double sum = 0.0;
    long count = 0;
    for (std::size_t ti = 0; ti < n_thr; ++ti) {
      for (double v : ap[ri][ti]) {
        sum += v;
        ++count;
      }
    }
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
  };
  const auto threshold_mean = [&](double thr) -> std::optional<double> {
    for (std::size_t ti = 0; ti < n_thr; ++ti) {
      if (std::abs(cfg.iou_thresholds[ti] - thr) < 1e-9) {
        if (ap[0][ti].empty()) return std::nullopt;
        return mean_of(ap[0][ti]);
      }
    }
    return std::nullopt;
  };

  EvalSummary summary;
  summary.ap = stratum_mean(0);
  summary.ap50 = threshold_mean(0.50);
  summary.ap75 = threshold_mean(0.75);
  summary.ap_small = stratum_mean(1);
  summary.ap_medium = stratum_mean(2);
  summary.ap_large = stratum_mean(3);
  return summary;
}

}  // namespace detkit
