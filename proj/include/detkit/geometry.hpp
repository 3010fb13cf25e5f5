#pragma once

#include <optional>

namespace detkit {

// Axis-aligned box in continuous corner coordinates. Boxes stored in a
// Dataset or DetectionSet always have strictly positive width and height;
// degenerate intermediates are represented as absent (see clip).
struct BBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  bool valid() const { return x2 > x1 && y2 > y1; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

// Resize rule: shorter edge toward `shorter_target`, longer edge capped at
// `longer_cap`, aspect ratio preserved.
struct ScaleSpec {
  int shorter_target = 800;
  int longer_cap = 1333;
};

// x' = x * scale_x + offset_x, y' = y * scale_y + offset_y. Scales are
// strictly positive; flips are handled separately (hflip_box).
struct AffineMap2D {
  double scale_x = 1.0;
  double scale_y = 1.0;
  double offset_x = 0.0;
  double offset_y = 0.0;

  friend bool operator==(const AffineMap2D&, const AffineMap2D&) = default;
};

struct ResizeResult {
  double scale = 1.0;
  int width = 0;
  int height = 0;
};

// Intersection over union with the continuous-area convention
// (width = x2 - x1, no pixel +1). 0 for disjoint boxes.
double iou(const BBox& a, const BBox& b);

// Intersection rectangle, or nullopt when it has zero width or height.
std::optional<BBox> clip(const BBox& b, const BBox& canvas);

BBox affine_map(const BBox& b, const AffineMap2D& m);

// Composition: apply `inner` first, then `outer`.
AffineMap2D compose(const AffineMap2D& outer, const AffineMap2D& inner);

// The affine map sending the corners of `src` onto the corners of `dst`.
AffineMap2D map_between(const BBox& src, const BBox& dst);

// scale = min(shorter_target / min(w,h), longer_cap / max(w,h));
// output dimensions rounded half away from zero and clamped to >= 1.
ResizeResult resize_for_scale(int width, int height, const ScaleSpec& spec);

// Mirror across the vertical centerline of a canvas of the given width.
BBox hflip_box(const BBox& b, double canvas_width);

}  // namespace detkit
