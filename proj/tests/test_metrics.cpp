#include <cmath>
#include <vector>

#include "doctest.h"
#include "teachset/error.hpp"
#include "teachset/metrics.hpp"
#include "teachset/rng.hpp"

using namespace teachset;
using geometry::BBox;
using metrics::Correlation;
using metrics::PhotoAnnotation;
using metrics::SetAnnotationSummary;

TEST_SUITE("metrics") {

TEST_CASE("shannon_wiener basics") {
    CHECK(metrics::shannon_wiener({"a", "a", "a"}) == 0.0);

    std::vector<std::string> three_equal;
    for (int i = 0; i < 10; ++i) {
        three_equal.push_back("a");
        three_equal.push_back("b");
        three_equal.push_back("c");
    }
    CHECK(metrics::shannon_wiener(three_equal) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(metrics::shannon_wiener({"x", "y"}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(metrics::shannon_wiener({}), Error);
}

TEST_CASE("shannon_wiener is permutation-invariant and maximal for equal groups") {
    Rng rng(3);
    std::vector<std::string> groups;
    for (int i = 0; i < 24; ++i) groups.push_back("g" + std::to_string(rng.below(4)));
    const double h = metrics::shannon_wiener(groups);
    std::vector<std::string> reversed(groups.rbegin(), groups.rend());
    CHECK(metrics::shannon_wiener(reversed) == doctest::Approx(h).epsilon(1e-12));
    CHECK(h <= std::log(4.0) + 1e-12);
}

TEST_CASE("annotated size variation") {
    const std::optional<BBox> half{BBox{0.0, 0.0, 1.0, 0.5}};  // area 0.5
    CHECK(metrics::annotated_size_variation({half, half, half}) == 0.0);
    // Fractions {0.0, 0.5}: mean 0.25, population SD 0.25.
    CHECK(metrics::annotated_size_variation({std::nullopt, half}) ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(metrics::annotated_size_variation({std::nullopt, std::nullopt}) == 0.0);
    CHECK_THROWS_AS(metrics::annotated_size_variation({}), Error);
}

TEST_CASE("annotated small") {
    CHECK(metrics::annotated_small(BBox{0.0, 0.0, 1.0, 0.10}));       // 0.10
    CHECK_FALSE(metrics::annotated_small(BBox{0.0, 0.0, 1.0, 0.5}));  // 0.50
    CHECK_FALSE(metrics::annotated_small(std::nullopt));
}

TEST_CASE("pearson endpoints") {
    const std::vector<double> xs = {1, 2, 3, 5, 8};
    std::vector<double> neg;
    for (double x : xs) neg.push_back(-x);

    const Correlation same = metrics::pearson(xs, xs);
    CHECK(same.defined);
    CHECK(same.r == doctest::Approx(1.0).epsilon(1e-12));

    const Correlation anti = metrics::pearson(xs, neg);
    CHECK(anti.defined);
    CHECK(anti.r == doctest::Approx(-1.0).epsilon(1e-12));

    const Correlation flat = metrics::pearson({4, 4, 4}, {1, 2, 3});
    CHECK_FALSE(flat.defined);
    CHECK(flat.n == 3);

    CHECK_THROWS_AS(metrics::pearson({1, 2}, {1, 2, 3}), Error);
    CHECK_THROWS_AS(metrics::pearson({1}, {1}), Error);
}

TEST_CASE("pearson affine invariance and sign flip") {
    Rng rng(17);
    std::vector<double> xs, ys;
    for (int i = 0; i < 30; ++i) {
        xs.push_back(rng.normal());
        ys.push_back(xs.back() * 0.5 + rng.normal() * 0.3);
    }
    const double base = metrics::pearson(xs, ys).r;
    std::vector<double> scaled;
    for (double y : ys) scaled.push_back(3.0 * y + 7.0);
    CHECK(metrics::pearson(xs, scaled).r == doctest::Approx(base).epsilon(1e-9));
    std::vector<double> negated;
    for (double y : ys) negated.push_back(-y);
    CHECK(metrics::pearson(xs, negated).r == doctest::Approx(-base).epsilon(1e-9));
}

TEST_CASE("summarize_annotations rolls up counts and diversities") {
    std::vector<PhotoAnnotation> photos(6);
    for (int i = 0; i < 6; ++i) {
        photos[i].background_group = (i < 3) ? "kitchen" : "desk";
        photos[i].perspective_group = "+Z";
        photos[i].bbox = BBox{0.0, 0.0, 1.0, 0.5};
    }
    photos[0].cropped = true;
    photos[1].hand = true;
    photos[2].blurry = true;
    photos[3].bbox = BBox{0.0, 0.0, 0.2, 0.5};  // area 0.1 -> small
    const SetAnnotationSummary s = metrics::summarize_annotations(photos);
    CHECK(s.photo_count == 6);
    CHECK(s.cropped_count == 1);
    CHECK(s.hand_count == 1);
    CHECK(s.blurry_count == 1);
    CHECK(s.small_count == 1);
    CHECK(s.background_diversity == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(s.perspective_diversity == 0.0);
    CHECK_THROWS_AS(metrics::summarize_annotations({}), Error);
}

TEST_CASE("correlate_descriptors with estimates equal to annotations") {
    // Matched scales: estimated percentages are exact affine images of the
    // annotated quantities, so every defined r must be 1.
    std::vector<std::pair<setdesc::SetDescriptors, SetAnnotationSummary>> pairs;
    Rng rng(29);
    for (int i = 0; i < 8; ++i) {
        SetAnnotationSummary ann;
        ann.photo_count = 30;
        ann.size_variation = rng.uniform(0.01, 0.13);
        ann.background_diversity = rng.uniform(0.0, 1.7);
        ann.perspective_diversity = rng.uniform(0.0, 1.7);
        ann.cropped_count = rng.below(20);
        ann.hand_count = rng.below(8);
        ann.blurry_count = rng.below(8);
        ann.small_count = 0;

        setdesc::SetDescriptors est;
        est.photo_count = 30;
        est.var_size_pct = ann.size_variation / 0.15 * 100.0;
        est.var_background_pct = ann.background_diversity * 40.0;
        est.var_perspective_pct = ann.perspective_diversity * 40.0;
        est.flag_percentages.cropped = 100.0 * ann.cropped_count / 30.0;
        est.flag_percentages.hand = 100.0 * ann.hand_count / 30.0;
        est.flag_percentages.blurry = 100.0 * ann.blurry_count / 30.0;
        est.flag_percentages.small = 0.0;
        pairs.emplace_back(est, ann);
    }
    const auto rows = metrics::correlate_descriptors(pairs);
    REQUIRE(rows.size() == 7);
    for (const auto& row : rows) {
        if (row.descriptor == "small_object") {
            CHECK_FALSE(row.correlation.defined);  // degenerate, like the published corpus
        } else {
            REQUIRE(row.correlation.defined);
            CHECK(row.correlation.r == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("correlate_descriptors with independent noise stays defined") {
    std::vector<std::pair<setdesc::SetDescriptors, SetAnnotationSummary>> pairs;
    Rng rng(31);
    for (int i = 0; i < 10; ++i) {
        SetAnnotationSummary ann;
        ann.photo_count = 30;
        ann.size_variation = rng.uniform(0.0, 0.2);
        ann.background_diversity = rng.uniform(0.0, 1.5);
        ann.perspective_diversity = rng.uniform(0.0, 1.5);
        ann.cropped_count = rng.below(20);
        ann.hand_count = rng.below(8);
        ann.blurry_count = rng.below(8);
        ann.small_count = rng.below(3);

        setdesc::SetDescriptors est;
        est.photo_count = 30;
        est.var_size_pct = rng.uniform(0.0, 100.0);
        est.var_background_pct = rng.uniform(0.0, 100.0);
        est.var_perspective_pct = rng.uniform(0.0, 90.0);
        est.flag_percentages.cropped = rng.uniform(0.0, 100.0);
        est.flag_percentages.hand = rng.uniform(0.0, 100.0);
        est.flag_percentages.blurry = rng.uniform(0.0, 100.0);
        est.flag_percentages.small = rng.uniform(0.0, 100.0);
        pairs.emplace_back(est, ann);
    }
    for (const auto& row : metrics::correlate_descriptors(pairs)) {
        CHECK(row.correlation.defined);
        CHECK(row.correlation.r >= -1.0);
        CHECK(row.correlation.r <= 1.0);
    }
}

TEST_CASE("correlate_descriptors requires two pairs") {
    std::vector<std::pair<setdesc::SetDescriptors, SetAnnotationSummary>> one(1);
    CHECK_THROWS_AS(metrics::correlate_descriptors(one), Error);
}

}  // TEST_SUITE
