#include <cmath>

#include "doctest.h"
#include "teachset/error.hpp"
#include "teachset/geometry.hpp"
#include "teachset/rng.hpp"

using namespace teachset;
using geometry::BBox;
using geometry::CameraPose;
using geometry::ObjectFrame;
using geometry::Side;
using geometry::Vec3;

TEST_SUITE("geometry") {

TEST_CASE("bbox area fraction") {
    CHECK(geometry::bbox_area_fraction({0, 0, 1, 1}) == 1.0);
    CHECK(geometry::bbox_area_fraction({0.25, 0.25, 0.55, 0.55}) ==
          doctest::Approx(0.09).epsilon(1e-12));
    CHECK(geometry::bbox_area_fraction({0.0, 0.0, 0.5, 0.25}) == 0.125);
    CHECK_THROWS_AS(geometry::bbox_area_fraction({0.5, 0.0, 0.5, 1.0}), Error);
    CHECK_THROWS_AS(geometry::bbox_area_fraction({-0.1, 0.0, 0.5, 1.0}), Error);
}

TEST_CASE("bbox square extent swap keeps area") {
    const BBox b{0.1, 0.4, 0.3, 0.6};  // 0.2 x 0.2
    const BBox swapped{0.4, 0.1, 0.6, 0.3};
    CHECK(geometry::bbox_area_fraction(b) == geometry::bbox_area_fraction(swapped));
}

TEST_CASE("bbox edge contact") {
    CHECK(geometry::bbox_touches_edge({0.0, 0.2, 0.5, 0.8}, 0.005));
    CHECK_FALSE(geometry::bbox_touches_edge({0.1, 0.1, 0.9, 0.9}, 0.005));
    CHECK(geometry::bbox_touches_edge({0.004, 0.2, 0.5, 0.8}, 0.005));
    CHECK(geometry::bbox_touches_edge({0.2, 0.2, 0.5, 0.996}, 0.005));
    // eps = 0 is exact contact
    CHECK(geometry::bbox_touches_edge({0.0, 0.2, 0.5, 0.8}, 0.0));
    CHECK_FALSE(geometry::bbox_touches_edge({1e-9, 0.2, 0.5, 0.8}, 0.0));
}

TEST_CASE("edge contact is monotone in eps") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const double x0 = rng.uniform(0.0, 0.5);
        const double y0 = rng.uniform(0.0, 0.5);
        const BBox b{x0, y0, x0 + rng.uniform(0.01, 0.5), y0 + rng.uniform(0.01, 0.5)};
        const double e1 = rng.uniform(0.0, 0.2);
        const double e2 = e1 + rng.uniform(0.0, 0.2);
        if (geometry::bbox_touches_edge(b, e1)) CHECK(geometry::bbox_touches_edge(b, e2));
    }
}

TEST_CASE("classify_side dominant axes") {
    ObjectFrame frame;  // identity axes at origin
    CHECK(geometry::classify_side({{0, 0, 1}, {0, 0, -1}}, frame) == Side::PosZ);
    CHECK(geometry::classify_side({{-2, 0.1, 0}, {1, 0, 0}}, frame) == Side::NegX);
    CHECK(geometry::classify_side({{0, -3, 0.5}, {0, 1, 0}}, frame) == Side::NegY);
}

TEST_CASE("classify_side tie-break prefers X") {
    ObjectFrame frame;
    const CameraPose pose{{1, 1, 0}, {0, 0, 1}};
    CHECK(geometry::classify_side(pose, frame) == Side::PosX);
}

TEST_CASE("classify_side under a rotated frame") {
    // Object axes rotated 90 degrees about Z: local X points along world Y.
    ObjectFrame frame;
    frame.axes = {Vec3{0, 1, 0}, Vec3{-1, 0, 0}, Vec3{0, 0, 1}};
    CHECK(geometry::classify_side({{0, 5, 0}, {0, -1, 0}}, frame) == Side::PosX);
    CHECK(geometry::classify_side({{5, 0, 0}, {-1, 0, 0}}, frame) == Side::NegY);
}

TEST_CASE("classify_side rejects coincident camera") {
    ObjectFrame frame;
    frame.center = {1, 2, 3};
    CHECK_THROWS_AS(geometry::classify_side({{1, 2, 3}, {0, 0, 1}}, frame), Error);
}

TEST_CASE("classify_side is invariant under uniform scaling") {
    Rng rng(9);
    ObjectFrame frame;
    frame.center = {0.5, -0.25, 2.0};
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 offset{rng.normal(), rng.normal(), rng.normal()};
        if (offset.norm() < 1e-6) continue;
        const CameraPose near{frame.center + offset, Vec3{0, 0, 1}};
        const CameraPose far{frame.center + offset * rng.uniform(0.1, 50.0), Vec3{0, 0, 1}};
        CHECK(geometry::classify_side(near, frame) == geometry::classify_side(far, frame));
    }
}

TEST_CASE("side names round-trip") {
    for (const Side s : {Side::PosX, Side::NegX, Side::PosY, Side::NegY, Side::PosZ,
                         Side::NegZ}) {
        CHECK(geometry::side_from_name(geometry::side_name(s)) == s);
    }
    CHECK_THROWS_AS(geometry::side_from_name("north"), Error);
}

TEST_CASE("pose and frame validation") {
    CameraPose bad{{0, 0, 0}, {0, 0, 2}};
    CHECK_THROWS_AS(bad.validate(), Error);
    ObjectFrame skew;
    skew.axes = {Vec3{1, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 0, 1}};
    CHECK_THROWS_AS(skew.validate(), Error);
}

}  // TEST_SUITE
