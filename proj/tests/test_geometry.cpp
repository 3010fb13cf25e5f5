#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "detkit/geometry.hpp"
#include "detkit/rng.hpp"
#include "oracles.hpp"

using namespace detkit;

namespace {

BBox random_int_box(Rng& rng, int max_extent) {
  const auto x1 = static_cast<double>(rng.uniform_int(0, max_extent - 1));
  const auto y1 = static_cast<double>(rng.uniform_int(0, max_extent - 1));
  const auto w = static_cast<double>(rng.uniform_int(1, max_extent));
  const auto h = static_cast<double>(rng.uniform_int(1, max_extent));
  return BBox{x1, y1, x1 + w, y1 + h};
}

BBox random_box(Rng& rng, double extent) {
  const double x1 = rng.uniform(0.0, extent);
  const double y1 = rng.uniform(0.0, extent);
  return BBox{x1, y1, x1 + rng.uniform(0.5, extent), y1 + rng.uniform(0.5, extent)};
}

}  // namespace

TEST_CASE("iou basics") {
  const BBox b{3, 4, 17, 21};
  CHECK(iou(b, b) == doctest::Approx(1.0));
  CHECK(iou(BBox{0, 0, 10, 10}, BBox{20, 20, 30, 30}) == 0.0);
  // 5x5 overlap, union 100 + 100 - 25
  CHECK(iou(BBox{0, 0, 10, 10}, BBox{5, 5, 15, 15}) ==
        doctest::Approx(25.0 / 175.0).epsilon(1e-12));
}

TEST_CASE("iou matches the rasterized pixel-count oracle on integer boxes") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const BBox a = random_int_box(rng, 64);
    const BBox b = random_int_box(rng, 64);
    CHECK(std::abs(iou(a, b) - oracle::raster_iou(a, b)) <= 1e-9);
  }
}

TEST_CASE("iou is symmetric, bounded, and 1 only for equal boxes") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const BBox a = random_int_box(rng, 32);
    const BBox b = random_int_box(rng, 32);
    const double v = iou(a, b);
    CHECK(v == iou(b, a));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    if (v == 1.0) CHECK(a == b);
  }
}

TEST_CASE("clip") {
  const BBox b{2, 3, 9, 8};
  CHECK(clip(b, b) == b);
  CHECK(clip(BBox{-5, -5, 5, 5}, BBox{0, 0, 100, 100}) == BBox{0, 0, 5, 5});
  CHECK(!clip(BBox{0, 0, 5, 5}, BBox{10, 10, 20, 20}).has_value());
  // zero-width intersection is absent, not an empty box
  CHECK(!clip(BBox{0, 0, 5, 5}, BBox{5, 0, 10, 5}).has_value());
}

TEST_CASE("clip is idempotent and contained in the canvas") {
  Rng rng(13);
  const BBox canvas{10, 10, 50, 40};
  for (int i = 0; i < 500; ++i) {
    const BBox b = random_box(rng, 60);
    const auto c = clip(b, canvas);
    if (!c) continue;
    CHECK(clip(*c, canvas) == *c);
    CHECK(c->x1 >= canvas.x1);
    CHECK(c->y1 >= canvas.y1);
    CHECK(c->x2 <= canvas.x2);
    CHECK(c->y2 <= canvas.y2);
  }
}

TEST_CASE("affine_map") {
  const BBox b{10, 10, 20, 20};
  CHECK(affine_map(b, AffineMap2D{}) == b);
  CHECK(affine_map(BBox{0, 0, 800, 600}, AffineMap2D{0.5, 2.0 / 3.0, 0, 0}) ==
        BBox{0, 0, 400, 400});
  CHECK(affine_map(b, AffineMap2D{1, 1, 100, 0}) == BBox{110, 10, 120, 20});
}

TEST_CASE("affine maps compose") {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const BBox b = random_box(rng, 100);
    const AffineMap2D m1{rng.uniform(0.1, 3), rng.uniform(0.1, 3),
                         rng.uniform(-50, 50), rng.uniform(-50, 50)};
    const AffineMap2D m2{rng.uniform(0.1, 3), rng.uniform(0.1, 3),
                         rng.uniform(-50, 50), rng.uniform(-50, 50)};
    const BBox two_step = affine_map(affine_map(b, m1), m2);
    const BBox one_step = affine_map(b, compose(m2, m1));
    CHECK(two_step.x1 == doctest::Approx(one_step.x1).epsilon(1e-9));
    CHECK(two_step.y1 == doctest::Approx(one_step.y1).epsilon(1e-9));
    CHECK(two_step.x2 == doctest::Approx(one_step.x2).epsilon(1e-9));
    CHECK(two_step.y2 == doctest::Approx(one_step.y2).epsilon(1e-9));
    CHECK(affine_map(b, m1).valid());
  }
}

TEST_CASE("map_between sends source corners onto destination corners") {
  Rng rng(19);
  for (int i = 0; i < 200; ++i) {
    const BBox src = random_box(rng, 100);
    const BBox dst = random_box(rng, 100);
    const BBox mapped = affine_map(src, map_between(src, dst));
    CHECK(mapped.x1 == doctest::Approx(dst.x1).epsilon(1e-9));
    CHECK(mapped.y1 == doctest::Approx(dst.y1).epsilon(1e-9));
    CHECK(mapped.x2 == doctest::Approx(dst.x2).epsilon(1e-9));
    CHECK(mapped.y2 == doctest::Approx(dst.y2).epsilon(1e-9));
  }
}

TEST_CASE("resize_for_scale") {
  const ScaleSpec spec{800, 1333};

  const auto a = resize_for_scale(640, 480, spec);
  CHECK(a.scale == doctest::Approx(800.0 / 480.0).epsilon(1e-12));
  CHECK(a.width == 1067);
  CHECK(a.height == 800);

  // longer cap binds
  const auto b = resize_for_scale(2000, 500, spec);
  CHECK(b.scale == doctest::Approx(0.6665).epsilon(1e-12));
  CHECK(b.width == 1333);
  CHECK(b.height == 333);

  const auto c = resize_for_scale(800, 800, spec);
  CHECK(c.scale == 1.0);
  CHECK(c.width == 800);
  CHECK(c.height == 800);
}

TEST_CASE("resize_for_scale never exceeds the caps (rounding slack 1)") {
  Rng rng(23);
  for (int i = 0; i < 1000; ++i) {
    const int w = static_cast<int>(rng.uniform_int(1, 4000));
    const int h = static_cast<int>(rng.uniform_int(1, 4000));
    const int shorter = static_cast<int>(rng.uniform_int(100, 1000));
    const ScaleSpec spec{shorter, shorter + static_cast<int>(rng.uniform_int(0, 800))};
    const auto r = resize_for_scale(w, h, spec);
    CHECK(std::max(r.width, r.height) <= spec.longer_cap + 1);
    CHECK(std::min(r.width, r.height) <= spec.shorter_target + 1);
    CHECK(r.width >= 1);
    CHECK(r.height >= 1);
  }
}

TEST_CASE("hflip_box") {
  CHECK(hflip_box(BBox{10, 0, 20, 10}, 100) == BBox{80, 0, 90, 10});
  CHECK(hflip_box(BBox{40, 0, 60, 10}, 100) == BBox{40, 0, 60, 10});

  Rng rng(29);
  for (int i = 0; i < 500; ++i) {
    const BBox b = random_int_box(rng, 50);
    CHECK(hflip_box(hflip_box(b, 128), 128) == b);
  }
}
