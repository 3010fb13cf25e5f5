#include "detkit/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace detkit {

double iou(const BBox& a, const BBox& b) {
  const double ix1 = std::max(a.x1, b.x1);
  const double iy1 = std::max(a.y1, b.y1);
  const double ix2 = std::min(a.x2, b.x2);
  const double iy2 = std::min(a.y2, b.y2);
  const double iw = ix2 - ix1;
  const double ih = iy2 - iy1;
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::optional<BBox> clip(const BBox& b, const BBox& canvas) {
  BBox r{std::max(b.x1, canvas.x1), std::max(b.y1, canvas.y1),
         std::min(b.x2, canvas.x2), std::min(b.y2, canvas.y2)};
  if (!r.valid()) return std::nullopt;
  return r;
}

BBox affine_map(const BBox& b, const AffineMap2D& m) {
  return BBox{b.x1 * m.scale_x + m.offset_x, b.y1 * m.scale_y + m.offset_y,
              b.x2 * m.scale_x + m.offset_x, b.y2 * m.scale_y + m.offset_y};
}

AffineMap2D compose(const AffineMap2D& outer, const AffineMap2D& inner) {
  return AffineMap2D{outer.scale_x * inner.scale_x,
                     outer.scale_y * inner.scale_y,
                     inner.offset_x * outer.scale_x + outer.offset_x,
                     inner.offset_y * outer.scale_y + outer.offset_y};
}

AffineMap2D map_between(const BBox& src, const BBox& dst) {
  const double sx = dst.width() / src.width();
  const double sy = dst.height() / src.height();
  return AffineMap2D{sx, sy, dst.x1 - src.x1 * sx, dst.y1 - src.y1 * sy};
}

ResizeResult resize_for_scale(int width, int height, const ScaleSpec& spec) {
  const double shorter = static_cast<double>(std::min(width, height));
  const double longer = static_cast<double>(std::max(width, height));
  const double scale = std::min(spec.shorter_target / shorter,
                                spec.longer_cap / longer);
  const int w = std::max(1, static_cast<int>(std::llround(width * scale)));
  const int h = std::max(1, static_cast<int>(std::llround(height * scale)));
  return ResizeResult{scale, w, h};
}

BBox hflip_box(const BBox& b, double canvas_width) {
  return BBox{canvas_width - b.x2, b.y1, canvas_width - b.x1, b.y2};
}

}  // namespace detkit
