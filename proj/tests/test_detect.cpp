#include <memory>

#include "doctest.h"
#include "teachset/detect.hpp"
#include "teachset/error.hpp"
#include "teachset/rng.hpp"

using namespace teachset;
using detect::AnnotationStore;
using detect::Detection;
using geometry::BBox;
using imaging::ImageRGB;

namespace {

// White field with an axis-aligned red rectangle, pixel coordinates [x0, x1).
ImageRGB scene_with_square(int w, int h, int x0, int y0, int x1, int y1) {
    ImageRGB img(w, h, {255, 255, 255});
    for (int y = std::max(0, y0); y < std::min(h, y1); ++y) {
        for (int x = std::max(0, x0); x < std::min(w, x1); ++x) {
            auto* p = img.px(x, y);
            p[0] = 200;
            p[1] = 20;
            p[2] = 20;
        }
    }
    return img;
}

}  // namespace

TEST_SUITE("detect") {

TEST_CASE("oracle detector passes annotations through") {
    auto store = std::make_shared<AnnotationStore>();
    metrics::PhotoAnnotation with_box;
    with_box.bbox = BBox{0.2, 0.2, 0.8, 0.8};
    store->put("a.png", with_box);
    store->put("b.png", metrics::PhotoAnnotation{});
    detect::OracleDetector det(store);

    const ImageRGB img(4, 4);
    const Detection da = det.detect(img, "a.png");
    REQUIRE(da.bbox.has_value());
    CHECK(da.bbox->x0 == 0.2);
    CHECK(da.bbox->y1 == 0.8);
    CHECK(da.confidence == 1.0);

    const Detection db = det.detect(img, "b.png");
    CHECK_FALSE(db.bbox.has_value());
    CHECK(db.confidence == 0.0);

    CHECK_THROWS_WITH_AS(det.detect(img, "missing.png"),
                         "no annotation for photo 'missing.png'", Error);
}

TEST_CASE("oracle segmenter reads the hand flag") {
    auto store = std::make_shared<AnnotationStore>();
    metrics::PhotoAnnotation handy;
    handy.hand = true;
    store->put("hand.png", handy);
    store->put("clean.png", metrics::PhotoAnnotation{});
    detect::OracleSegmenter seg(store);
    const ImageRGB img(4, 4);
    CHECK(seg.hand_fraction(img, "hand.png") == 1.0);
    CHECK(seg.hand_fraction(img, "clean.png") == 0.0);
}

TEST_CASE("heuristic detector finds nothing on a uniform image") {
    detect::HeuristicDetector det;
    const ImageRGB img(50, 50, {180, 180, 180});
    const Detection d = det.detect(img, "");
    CHECK_FALSE(d.bbox.has_value());
    CHECK(d.confidence == 0.0);
}

TEST_CASE("heuristic detector boxes a centered square") {
    detect::HeuristicDetector det;
    // 40x40 red square centered on a 100x100 white field: pixels [30, 70).
    const ImageRGB img = scene_with_square(100, 100, 30, 30, 70, 70);
    const Detection d = det.detect(img, "");
    REQUIRE(d.bbox.has_value());
    CHECK(d.bbox->x0 == doctest::Approx(0.30).epsilon(1e-9));
    CHECK(d.bbox->y0 == doctest::Approx(0.30).epsilon(1e-9));
    CHECK(d.bbox->x1 == doctest::Approx(0.70).epsilon(1e-9));
    CHECK(d.bbox->y1 == doctest::Approx(0.70).epsilon(1e-9));
    CHECK(d.confidence == doctest::Approx(1.0));  // solid rectangle fills its box
}

TEST_CASE("heuristic detector reports an edge-touching box for a half-out square") {
    detect::HeuristicDetector det;
    const ImageRGB img = scene_with_square(100, 100, -20, 30, 20, 70);
    const Detection d = det.detect(img, "");
    REQUIRE(d.bbox.has_value());
    CHECK(geometry::bbox_touches_edge(*d.bbox, 0.0));
    CHECK(d.bbox->x0 == 0.0);
}

TEST_CASE("heuristic detector ignores components below the area floor") {
    detect::HeuristicDetectorConfig cfg;
    cfg.min_area_fraction = 0.01;  // 100 px on a 100x100 image
    detect::HeuristicDetector det(cfg);
    const ImageRGB img = scene_with_square(100, 100, 50, 50, 55, 55);  // 25 px
    CHECK_FALSE(det.detect(img, "").bbox.has_value());
}

TEST_CASE("heuristic detection is translation-consistent") {
    detect::HeuristicDetector det;
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int x0 = 10 + static_cast<int>(rng.below(30));
        const int y0 = 10 + static_cast<int>(rng.below(30));
        const int k = 1 + static_cast<int>(rng.below(15));
        const Detection a = det.detect(scene_with_square(100, 100, x0, y0, x0 + 20, y0 + 20), "");
        const Detection b =
            det.detect(scene_with_square(100, 100, x0 + k, y0, x0 + 20 + k, y0 + 20), "");
        REQUIRE(a.bbox.has_value());
        REQUIRE(b.bbox.has_value());
        CHECK(std::abs((b.bbox->x0 - a.bbox->x0) * 100 - k) <= 1.0);
        CHECK(std::abs((b.bbox->x1 - a.bbox->x1) * 100 - k) <= 1.0);
        CHECK(b.bbox->y0 == doctest::Approx(a.bbox->y0).epsilon(1e-9));
    }
}

TEST_CASE("heuristic detection is repeatable") {
    detect::HeuristicDetector det;
    const ImageRGB img = scene_with_square(64, 48, 10, 12, 30, 40);
    const Detection a = det.detect(img, "");
    const Detection b = det.detect(img, "");
    REQUIRE(a.bbox.has_value());
    CHECK(a.bbox->x0 == b.bbox->x0);
    CHECK(a.confidence == b.confidence);
}

TEST_CASE("chroma segmenter counts tone-matching pixels") {
    detect::ChromaSegmenterConfig cfg;
    cfg.tones = {{224, 172, 105}};
    cfg.distance = 10.0;
    detect::ChromaSegmenter seg(cfg);

    ImageRGB img(100, 100, {10, 10, 10});
    CHECK(seg.hand_fraction(img, "") == 0.0);

    for (int y = 0; y < 10; ++y) {
        for (int x = 0; x < 10; ++x) {
            auto* p = img.px(x, y);
            p[0] = 224;
            p[1] = 172;
            p[2] = 105;
        }
    }
    CHECK(seg.hand_fraction(img, "") == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("chroma segmenter requires a tone within distance") {
    detect::ChromaSegmenterConfig cfg;
    cfg.tones = {{100, 100, 100}};
    cfg.distance = 5.0;
    detect::ChromaSegmenter seg(cfg);
    ImageRGB close(2, 2, {103, 100, 100});  // distance 3
    CHECK(seg.hand_fraction(close, "") == 1.0);
    ImageRGB far(2, 2, {110, 100, 100});  // distance 10
    CHECK(seg.hand_fraction(far, "") == 0.0);
}

}  // TEST_SUITE
