#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <string>

#include "detkit/coco.hpp"
#include "detkit/errors.hpp"
#include "detkit/rng.hpp"
#include "helpers.hpp"

using namespace detkit;
using testutil::DatasetBuilder;

namespace {

std::string eighty_categories_doc() {
  std::string cats;
  for (int i = 1; i <= 80; ++i) {
    if (i > 1) cats += ",";
    cats += R"({"id":)" + std::to_string(i) + R"(,"name":"c)" +
            std::to_string(i) + R"(","supercategory":"s)" +
            std::to_string(1 + (i - 1) / 7) + R"("})";
  }
  return R"({"images":[],"annotations":[],"categories":[)" + cats + "]}";
}

}  // namespace

TEST_CASE("empty dataset with 80 categories parses to empty indices") {
  const Dataset d = parse_dataset(eighty_categories_doc());
  CHECK(d.images().empty());
  CHECK(d.annotations().empty());
  CHECK(d.categories().size() == 80);
  CHECK(d.images_by_supercategory().empty());
}

TEST_CASE("category with supercategory parses") {
  const Dataset d = parse_dataset(
      R"({"images":[],"annotations":[],
          "categories":[{"id":7,"name":"train","supercategory":"vehicle"}]})");
  REQUIRE(d.categories().size() == 1);
  CHECK(d.categories()[0].name == "train");
  CHECK(d.categories()[0].supercategory == "vehicle");
}

TEST_CASE("malformed JSON raises a parse error with a byte offset") {
  try {
    parse_dataset(R"({"images":[},)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.byte_offset() > 0);
  }
}

TEST_CASE("dangling references and duplicates are rejected") {
  const char* dangling = R"({
    "images":[{"id":1,"file_name":"a.png","width":10,"height":10}],
    "annotations":[{"id":77,"image_id":2,"category_id":1,
                    "bbox":[0,0,5,5],"area":25,"iscrowd":0}],
    "categories":[{"id":1,"name":"car","supercategory":"vehicle"}]})";
  CHECK_THROWS_WITH_AS(parse_dataset(dangling),
                       doctest::Contains("annotation id 77"), ValidationError);

  const char* dup = R"({
    "images":[{"id":1,"file_name":"a.png","width":10,"height":10},
              {"id":1,"file_name":"b.png","width":10,"height":10}],
    "annotations":[],
    "categories":[]})";
  CHECK_THROWS_WITH_AS(parse_dataset(dup), doctest::Contains("duplicate"),
                       ValidationError);
}

TEST_CASE("degenerate boxes and zero areas are rejected at parse time") {
  const char* zero_w = R"({
    "images":[{"id":1,"file_name":"a.png","width":10,"height":10}],
    "annotations":[{"id":1,"image_id":1,"category_id":1,
                    "bbox":[0,0,0,5],"area":1,"iscrowd":0}],
    "categories":[{"id":1,"name":"car","supercategory":"vehicle"}]})";
  CHECK_THROWS_AS(parse_dataset(zero_w), ValidationError);

  const char* zero_area = R"({
    "images":[{"id":1,"file_name":"a.png","width":10,"height":10}],
    "annotations":[{"id":1,"image_id":1,"category_id":1,
                    "bbox":[0,0,4,5],"area":0,"iscrowd":0}],
    "categories":[{"id":1,"name":"car","supercategory":"vehicle"}]})";
  CHECK_THROWS_AS(parse_dataset(zero_area), ValidationError);
}

TEST_CASE("unknown extra fields are ignored") {
  const Dataset d = parse_dataset(R"({
    "info":{"year":2020},
    "images":[{"id":1,"file_name":"a.png","width":10,"height":10,"license":3}],
    "annotations":[{"id":1,"image_id":1,"category_id":1,
                    "bbox":[0,0,4,5],"area":20,"iscrowd":0,"segmentation":[]}],
    "categories":[{"id":1,"name":"car","supercategory":"vehicle","extra":true}]})");
  CHECK(d.images().size() == 1);
  CHECK(d.annotations().size() == 1);
}

TEST_CASE("detections parse with xywh to corner conversion") {
  DatasetBuilder b;
  b.image(1, 100, 100).category(3, "cat", "animal");
  const Dataset d = b.build();

  const DetectionSet empty = parse_detections("[]", d);
  CHECK(empty.detections().empty());

  const DetectionSet one = parse_detections(
      R"([{"image_id":1,"category_id":3,"bbox":[10,10,20,20],"score":0.9}])", d);
  REQUIRE(one.detections().size() == 1);
  CHECK(one.detections()[0].bbox == BBox{10, 10, 30, 30});

  CHECK_THROWS_AS(
      parse_detections(
          R"([{"image_id":1,"category_id":3,"bbox":[0,0,5,5],"score":1.5}])", d),
      ValidationError);
  CHECK_THROWS_AS(
      parse_detections(
          R"([{"image_id":9,"category_id":3,"bbox":[0,0,5,5],"score":0.5}])", d),
      ValidationError);
}

TEST_CASE("write_detections inverts the corner conversion") {
  DatasetBuilder b;
  b.image(1, 100, 100).category(3, "cat", "animal");
  const Dataset d = b.build();
  const DetectionSet set(
      {Detection{1, 3, BBox{10, 10, 30, 30}, 0.5}});
  const std::string text = write_detections(set);
  CHECK(text.find("\"bbox\": [\n      10.0,\n      10.0,\n      20.0,\n      20.0\n    ]") !=
        std::string::npos);
  const DetectionSet back = parse_detections(text, d);
  REQUIRE(back.detections().size() == 1);
  CHECK(back.detections()[0] == set.detections()[0]);
}

TEST_CASE("fixture round-trips through write and parse") {
  const Dataset d1 = testutil::load_fixture();
  const std::string text = write_dataset(d1);
  const Dataset d2 = parse_dataset(text);

  CHECK(d1.images() == d2.images());
  CHECK(d1.annotations() == d2.annotations());
  CHECK(d1.categories() == d2.categories());
  // canonical form is a fixed point of write(parse(.))
  CHECK(write_dataset(d2) == text);
}

TEST_CASE("round-trip survives awkward floating-point coordinates") {
  DatasetBuilder b;
  b.image(1, 4000, 4000).category(1, "car", "vehicle");
  Rng rng(101);
  std::int64_t id = 1;
  std::vector<Annotation> anns;
  for (int i = 0; i < 500; ++i) {
    const double x1 = rng.uniform(0.0, 1000.0);
    const double y1 = rng.uniform(0.0, 1000.0);
    b.annotation(id++, 1, 1,
                 BBox{x1, y1, x1 + rng.uniform(1e-3, 900.0),
                      y1 + rng.uniform(1e-3, 900.0)});
  }
  const Dataset d1 = b.build();
  const Dataset d2 = parse_dataset(write_dataset(d1));
  CHECK(d1.annotations() == d2.annotations());
}

TEST_CASE("empty dataset writes empty arrays") {
  const std::string text = write_dataset(Dataset{});
  const Dataset d = parse_dataset(text);
  CHECK(d.images().empty());
  CHECK(d.annotations().empty());
  CHECK(d.categories().empty());
}

TEST_CASE("supercategory candidates") {
  // 3 images; only image 2 holds a vehicle ("train")
  DatasetBuilder b;
  b.image(1, 64, 64).image(2, 64, 64).image(3, 64, 64);
  b.category(1, "train", "vehicle").category(2, "cat", "animal");
  b.annotation(1, 1, 2, BBox{0, 0, 10, 10});
  b.annotation(2, 2, 1, BBox{0, 0, 10, 10});
  b.annotation(3, 3, 2, BBox{0, 0, 10, 10});
  const Dataset d = b.build();

  CHECK(supercategory_candidates(d, {"vehicle"}) ==
        std::set<std::int64_t>{2});
  CHECK(supercategory_candidates(d, {"nonexistent"}).empty());
  CHECK(supercategory_candidates(d, {"vehicle", "animal"}) ==
        std::set<std::int64_t>{1, 2, 3});
}

TEST_CASE("crowd-only images are not sampling candidates") {
  DatasetBuilder b;
  b.image(1, 64, 64).image(2, 64, 64);
  b.category(1, "car", "vehicle");
  b.annotation(1, 1, 1, BBox{0, 0, 10, 10}, /*crowd=*/true);
  b.annotation(2, 2, 1, BBox{0, 0, 10, 10});
  const Dataset d = b.build();
  CHECK(supercategory_candidates(d, {"vehicle"}) ==
        std::set<std::int64_t>{2});
  // the plain index still records the crowd image
  CHECK(d.images_by_supercategory().at("vehicle") ==
        std::set<std::int64_t>({1, 2}));
}

TEST_CASE("candidates distribute over unions of supercategory sets") {
  const Dataset d = testutil::load_fixture();
  const std::vector<std::string> names = {"vehicle", "animal", "furniture",
                                          "food", "bogus"};
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    std::set<std::string> s1, s2;
    for (const auto& n : names) {
      if (rng.uniform() < 0.4) s1.insert(n);
      if (rng.uniform() < 0.4) s2.insert(n);
    }
    std::set<std::string> both = s1;
    both.insert(s2.begin(), s2.end());
    auto lhs = supercategory_candidates(d, both);
    auto a = supercategory_candidates(d, s1);
    const auto b2 = supercategory_candidates(d, s2);
    a.insert(b2.begin(), b2.end());
    CHECK(lhs == a);
  }
}

TEST_CASE("all-supercategory query returns every image with a non-crowd annotation") {
  const Dataset d = testutil::load_fixture();
  const auto all = supercategory_candidates(
      d, {"vehicle", "animal", "furniture", "food"});
  std::set<std::int64_t> expected;
  for (const Annotation& a : d.annotations()) {
    if (!a.iscrowd) expected.insert(a.image_id);
  }
  CHECK(all == expected);
}

TEST_CASE("indices rebuild identically from the flat lists") {
  const Dataset d1 = testutil::load_fixture();
  const Dataset d2(d1.images(), d1.annotations(), d1.categories());
  CHECK(d1.images_by_supercategory() == d2.images_by_supercategory());
  CHECK(d1.images_by_supercategory_noncrowd() ==
        d2.images_by_supercategory_noncrowd());
  for (const ImageRecord& im : d1.images()) {
    const auto a1 = d1.annotations_of(im.id);
    const auto a2 = d2.annotations_of(im.id);
    REQUIRE(a1.size() == a2.size());
    for (std::size_t i = 0; i < a1.size(); ++i) CHECK(*a1[i] == *a2[i]);
  }
}

TEST_CASE("detection set groups by image in input order") {
  const std::vector<Detection> flat = {
      {2, 1, BBox{0, 0, 5, 5}, 0.5},
      {1, 1, BBox{0, 0, 5, 5}, 0.9},
      {2, 1, BBox{1, 1, 6, 6}, 0.7},
  };
  const DetectionSet set(flat, "model-a");
  CHECK(set.tag() == "model-a");
  CHECK(set.image_ids() == std::vector<std::int64_t>{1, 2});
  const auto of2 = set.for_image(2);
  REQUIRE(of2.size() == 2);
  CHECK(of2[0]->score == 0.5);
  CHECK(of2[1]->score == 0.7);
  CHECK(set.for_image(42).empty());
}
