#include "detkit/suppress.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "detkit/errors.hpp"

namespace detkit {

namespace {

// Indices 0..n-1 ordered by (score desc, input index asc).
std::vector<std::size_t> score_order(const std::vector<Detection>& dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });
  return order;
}

}  // namespace

SuppressMethod suppress_method_from_string(const std::string& name) {
  if (name == "hard") return SuppressMethod::hard;
  if (name == "soft-linear" || name == "soft_linear") return SuppressMethod::soft_linear;
  if (name == "soft-gaussian" || name == "soft_gaussian") return SuppressMethod::soft_gaussian;
  if (name == "tkv") return SuppressMethod::tkv;
  throw ValidationError("unknown suppression method '" + name + "'");
}

std::string to_string(SuppressMethod method) {
  switch (method) {
    case SuppressMethod::hard: return "hard";
    case SuppressMethod::soft_linear: return "soft-linear";
    case SuppressMethod::soft_gaussian: return "soft-gaussian";
    case SuppressMethod::tkv: return "tkv";
  }
  return "?";
}

std::vector<Detection> hard_nms(const std::vector<Detection>& dets,
                                const SuppressionConfig& cfg) {
  const auto order = score_order(dets);
  std::vector<bool> removed(dets.size(), false);
  std::vector<Detection> kept;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (removed[order[i]]) continue;
    const Detection& head = dets[order[i]];
    kept.push_back(head);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (removed[order[j]]) continue;
      if (iou(head.bbox, dets[order[j]].bbox) > cfg.iou_threshold) {
        removed[order[j]] = true;
      }
    }
  }
  return kept;
}

std::vector<Detection> soft_nms_with_decay(
    const std::vector<Detection>& dets,
    const std::function<double(double)>& decay, double score_floor,
    int max_per_image) {
  struct Live {
    Detection det;
    std::size_t input_index;
  };
  std::vector<Live> live;
  live.reserve(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) live.push_back({dets[i], i});

  std::vector<Detection> frozen;
  while (!live.empty()) {
    // current maximum; ties resolved by lowest input index
    std::size_t best = 0;
    for (std::size_t i = 1; i < live.size(); ++i) {
      if (live[i].det.score > live[best].det.score) best = i;
    }
    const Detection head = live[best].det;
    frozen.push_back(head);
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(best));

    std::vector<Live> next;
    next.reserve(live.size());
    for (Live& l : live) {
      l.det.score *= decay(iou(head.bbox, l.det.bbox));
      if (l.det.score >= score_floor) next.push_back(std::move(l));
    }
    live = std::move(next);
  }
  // selection order is already score-descending with the index tie-break
  if (static_cast<int>(frozen.size()) > max_per_image) {
    frozen.resize(static_cast<std::size_t>(max_per_image));
  }
  return frozen;
}

std::vector<Detection> soft_nms(const std::vector<Detection>& dets,
                                const SuppressionConfig& cfg) {
  if (cfg.method == SuppressMethod::soft_gaussian) {
    const double sigma = cfg.sigma;
    return soft_nms_with_decay(
        dets, [sigma](double v) { return std::exp(-(v * v) / sigma); },
        cfg.score_floor, cfg.max_per_image);
  }
  const double nt = cfg.iou_threshold;
  return soft_nms_with_decay(
      dets, [nt](double v) { return v > nt ? 1.0 - v : 1.0; }, cfg.score_floor,
      cfg.max_per_image);
}

std::vector<Detection> tkv_nms(const std::vector<Detection>& dets,
                               const SuppressionConfig& cfg) {
  const auto order = score_order(dets);
  std::vector<bool> removed(dets.size(), false);
  std::vector<Detection> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (removed[order[i]]) continue;
    const Detection& head = dets[order[i]];
    // cluster members in score order, head first
    std::vector<const Detection*> cluster{&head};
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (removed[order[j]]) continue;
      if (iou(head.bbox, dets[order[j]].bbox) > cfg.iou_threshold) {
        removed[order[j]] = true;
        cluster.push_back(&dets[order[j]]);
      }
    }
    const std::size_t votes =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(cfg.k, 1)),
                              cluster.size());
    double wsum = 0.0;
    BBox acc{0, 0, 0, 0};
    for (std::size_t v = 0; v < votes; ++v) {
      const Detection& m = *cluster[v];
      acc.x1 += m.score * m.bbox.x1;
      acc.y1 += m.score * m.bbox.y1;
      acc.x2 += m.score * m.bbox.x2;
      acc.y2 += m.score * m.bbox.y2;
      wsum += m.score;
    }
    Detection vote = head;
    vote.bbox = BBox{acc.x1 / wsum, acc.y1 / wsum, acc.x2 / wsum, acc.y2 / wsum};
    out.push_back(vote);
  }
  if (static_cast<int>(out.size()) > cfg.max_per_image) {
    out.resize(static_cast<std::size_t>(cfg.max_per_image));
  }
  return out;
}

std::vector<Detection> suppress_image(const std::vector<Detection>& dets,
                                      const SuppressionConfig& cfg) {
  // partition by class, preserving input order within each class
  std::map<std::int64_t, std::vector<Detection>> by_class;
  for (const Detection& d : dets) by_class[d.category_id].push_back(d);

  std::vector<Detection> merged;
  for (const auto& [cat, class_dets] : by_class) {
    std::vector<Detection> kept;
    switch (cfg.method) {
      case SuppressMethod::hard:
        kept = hard_nms(class_dets, cfg);
        break;
      case SuppressMethod::soft_linear:
      case SuppressMethod::soft_gaussian:
        kept = soft_nms(class_dets, cfg);
        break;
      case SuppressMethod::tkv:
        kept = tkv_nms(class_dets, cfg);
        break;
    }
    merged.insert(merged.end(), kept.begin(), kept.end());
  }
  std::stable_sort(merged.begin(), merged.end(),
                   [](const Detection& a, const Detection& b) {
                     return a.score > b.score;
                   });
  if (static_cast<int>(merged.size()) > cfg.max_per_image) {
    merged.resize(static_cast<std::size_t>(cfg.max_per_image));
  }
  return merged;
}

}  // namespace detkit
