#include <cmath>
#include <vector>

#include "doctest.h"
#include "teachset/error.hpp"
#include "teachset/recognizer.hpp"
#include "teachset/rng.hpp"

using namespace teachset;
using imaging::ImageRGB;
using recognizer::Decision;
using recognizer::FeatureVector;
using recognizer::Model;
using recognizer::RejectionConfig;
using recognizer::TrainConfig;
using recognizer::TrainSample;

namespace {

std::vector<TrainSample> two_cluster_samples(Rng& rng, int per_class, std::size_t dim) {
    std::vector<TrainSample> samples;
    for (int i = 0; i < per_class; ++i) {
        TrainSample a;
        a.label = "alpha";
        TrainSample b;
        b.label = "beta";
        for (std::size_t j = 0; j < dim; ++j) {
            a.features.values.push_back(0.2 + 0.05 * rng.normal());
            b.features.values.push_back(0.8 + 0.05 * rng.normal());
        }
        samples.push_back(std::move(a));
        samples.push_back(std::move(b));
    }
    return samples;
}

}  // namespace

TEST_SUITE("recognizer") {

TEST_CASE("grid extractor on uniform images") {
    recognizer::GridPoolExtractor ex;
    const FeatureVector black = ex.extract(ImageRGB(32, 32, {0, 0, 0}), "");
    REQUIRE(black.values.size() == 192);
    for (double v : black.values) CHECK(v == 0.0);
    const FeatureVector white = ex.extract(ImageRGB(32, 32, {255, 255, 255}), "");
    for (double v : white.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("grid extractor separates left red from right blue") {
    ImageRGB img(64, 64);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            auto* p = img.px(x, y);
            if (x < 32) {
                p[0] = 255;
            } else {
                p[2] = 255;
            }
        }
    }
    recognizer::GridPoolExtractor ex;
    const FeatureVector f = ex.extract(img, "");
    // Channel-major layout: R cells first, then G, then B; rows of 8.
    for (int gy = 0; gy < 8; ++gy) {
        for (int gx = 0; gx < 8; ++gx) {
            const double r = f.values[0 * 64 + gy * 8 + gx];
            const double b = f.values[2 * 64 + gy * 8 + gx];
            if (gx < 4) {
                CHECK(r == doctest::Approx(1.0));
                CHECK(b == 0.0);
            } else {
                CHECK(r == 0.0);
                CHECK(b == doctest::Approx(1.0));
            }
        }
    }
}

TEST_CASE("file extractor serves stored features and errors on unknown ids") {
    std::map<std::string, FeatureVector> table;
    table["p1"] = FeatureVector{{1.0, 2.0}};
    recognizer::FileFeatureExtractor ex(table, "feat.json");
    CHECK(ex.extract(ImageRGB(2, 2), "p1").values == std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(ex.extract(ImageRGB(2, 2), "p2"), Error);
    CHECK(ex.info().id == "file");
}

TEST_CASE("training on separable clusters reaches training accuracy 1") {
    Rng rng(101);
    const auto samples = two_cluster_samples(rng, 20, 8);
    const auto result = recognizer::train(samples, {});
    const Model& m = result.model;
    CHECK(m.labels == std::vector<std::string>{"alpha", "beta"});
    CHECK(m.dim == 8);
    int correct = 0;
    for (const auto& s : samples) {
        const auto conf = recognizer::predict_confidences(m, s.features);
        const std::size_t arg = conf[0] > conf[1] ? 0 : 1;
        if (m.labels[arg] == s.label) ++correct;
    }
    CHECK(correct == static_cast<int>(samples.size()));
}

TEST_CASE("duplicating every sample leaves the weights unchanged") {
    Rng rng(7);
    const auto samples = two_cluster_samples(rng, 10, 5);
    std::vector<TrainSample> doubled = samples;
    doubled.insert(doubled.end(), samples.begin(), samples.end());
    const auto w1 = recognizer::train(samples, {}).model.weights;
    const auto w2 = recognizer::train(doubled, {}).model.weights;
    REQUIRE(w1.size() == w2.size());
    for (std::size_t i = 0; i < w1.size(); ++i) {
        CHECK(std::abs(w1[i] - w2[i]) <= 1e-12);
    }
}

TEST_CASE("training rejects degenerate inputs") {
    std::vector<TrainSample> single = {{FeatureVector{{1.0}}, "only"},
                                       {FeatureVector{{2.0}}, "only"}};
    CHECK_THROWS_AS(recognizer::train(single, {}), Error);
    std::vector<TrainSample> ragged = {{FeatureVector{{1.0}}, "a"},
                                       {FeatureVector{{1.0, 2.0}}, "b"}};
    CHECK_THROWS_AS(recognizer::train(ragged, {}), Error);
    CHECK_THROWS_AS(recognizer::train({}, {}), Error);
}

TEST_CASE("analytic gradient matches central finite differences") {
    Rng rng(211);
    for (int instance = 0; instance < 20; ++instance) {
        const std::size_t dim = 1 + rng.below(5);
        const std::size_t classes = 2 + rng.below(2);
        std::vector<std::string> labels;
        for (std::size_t c = 0; c < classes; ++c) labels.push_back("c" + std::to_string(c));
        std::vector<TrainSample> samples;
        const std::size_t n = 3 + rng.below(6);
        for (std::size_t i = 0; i < n; ++i) {
            TrainSample s;
            s.label = labels[rng.below(classes)];
            for (std::size_t j = 0; j < dim; ++j) s.features.values.push_back(rng.normal());
            samples.push_back(std::move(s));
        }
        std::vector<double> weights(classes * (dim + 1));
        for (double& w : weights) w = rng.normal() * 0.5;

        const auto grad =
            recognizer::cross_entropy_gradient(weights, classes, dim, samples, labels);
        const double h = 1e-6;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            std::vector<double> wp = weights, wm = weights;
            wp[k] += h;
            wm[k] -= h;
            const double fd = (recognizer::mean_cross_entropy(wp, classes, dim, samples, labels) -
                               recognizer::mean_cross_entropy(wm, classes, dim, samples, labels)) /
                              (2 * h);
            const double denom = std::max({std::abs(fd), std::abs(grad[k]), 1e-8});
            CHECK(std::abs(fd - grad[k]) / denom < 1e-5);
        }
    }
}

TEST_CASE("loss history is monotonically non-increasing at the default rate") {
    Rng rng(19);
    const auto samples = two_cluster_samples(rng, 15, 6);
    const auto result = recognizer::train(samples, {});
    REQUIRE(result.loss_history.size() == 501);
    CHECK(result.loss_history.front() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    for (std::size_t i = 1; i < result.loss_history.size(); ++i) {
        CHECK(result.loss_history[i] <= result.loss_history[i - 1]);
    }
}

TEST_CASE("zero-weight model predicts uniform confidences") {
    Model m;
    m.labels = {"a", "b", "c"};
    m.dim = 4;
    m.weights.assign(3 * 5, 0.0);
    const auto conf = recognizer::predict_confidences(m, FeatureVector{{1, 2, 3, 4}});
    for (double c : conf) CHECK(c == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("softmax of scores (10, 0, 0)") {
    Model m;
    m.labels = {"a", "b", "c"};
    m.dim = 1;
    // bias-only rows: scores are (10, 0, 0) regardless of input
    m.weights = {0, 10, 0, 0, 0, 0};
    const auto conf = recognizer::predict_confidences(m, FeatureVector{{0.0}});
    const double e10 = std::exp(10.0);
    const double denom = e10 + 2.0;
    CHECK(conf[0] == doctest::Approx(e10 / denom).epsilon(1e-12));
    CHECK(conf[1] == doctest::Approx(1.0 / denom).epsilon(1e-12));
    CHECK(conf[0] == doctest::Approx(0.99991).epsilon(1e-4));

    double sum = 0.0;
    for (double c : conf) sum += c;
    CHECK(std::abs(sum - 1.0) <= 1e-9);

    CHECK_THROWS_AS(recognizer::predict_confidences(m, FeatureVector{{1.0, 2.0}}), Error);
}

TEST_CASE("confidences sum to one and stay positive on random models") {
    Rng rng(313);
    for (int trial = 0; trial < 30; ++trial) {
        Model m;
        const std::size_t classes = 2 + rng.below(4);
        m.dim = 1 + rng.below(6);
        for (std::size_t c = 0; c < classes; ++c) m.labels.push_back(std::to_string(c));
        m.weights.resize(classes * (m.dim + 1));
        for (double& w : m.weights) w = rng.normal() * 3.0;
        FeatureVector f;
        for (std::size_t j = 0; j < m.dim; ++j) f.values.push_back(rng.normal());
        const auto conf = recognizer::predict_confidences(m, f);
        double sum = 0.0;
        for (double c : conf) {
            CHECK(c > 0.0);
            CHECK(c < 1.0);
            sum += c;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("entropy values") {
    const std::vector<double> uniform3 = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    CHECK(recognizer::entropy(uniform3) == doctest::Approx(std::log(3.0)).epsilon(1e-12));

    const std::vector<double> skewed = {0.9, 0.05, 0.05};
    const double expected = -(0.9 * std::log(0.9) + 2 * 0.05 * std::log(0.05));
    CHECK(recognizer::entropy(skewed) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(recognizer::entropy(skewed) == doctest::Approx(0.3944).epsilon(1e-3));

    const std::vector<double> near_onehot = {1.0 - 2e-12, 1e-12, 1e-12};
    CHECK(recognizer::entropy(near_onehot) == doctest::Approx(0.0).epsilon(1e-9));

    CHECK(recognizer::entropy(uniform3, recognizer::LogBase::Base2) ==
          doctest::Approx(std::log2(3.0)).epsilon(1e-12));
}

TEST_CASE("rejection rule at the published thresholds") {
    const RejectionConfig cfg;

    const Decision uniform = recognizer::decide({1.0 / 3, 1.0 / 3, 1.0 / 3}, cfg);
    CHECK_FALSE(uniform.class_index.has_value());  // max 0.333 < 0.4

    const Decision confident = recognizer::decide({0.9, 0.05, 0.05}, cfg);
    REQUIRE(confident.class_index.has_value());
    CHECK(*confident.class_index == 0);

    const Decision borderline = recognizer::decide({0.39, 0.31, 0.30}, cfg);
    CHECK_FALSE(borderline.class_index.has_value());  // max 0.39 < 0.4
}

TEST_CASE("entropy clause is unreachable for three classes in nats") {
    // Three-class entropy is at most ln 3 ~ 1.0986 < 2.0, so for the default
    // configuration rejection reduces to the confidence clause.
    CHECK(std::log(3.0) < 2.0);
    Rng rng(41);
    const RejectionConfig cfg;
    for (int trial = 0; trial < 500; ++trial) {
        double a = rng.uniform(), b = rng.uniform(), c = rng.uniform();
        const double s = a + b + c;
        const std::vector<double> conf = {a / s, b / s, c / s};
        CHECK(recognizer::entropy(conf) <= std::log(3.0) + 1e-12);
        const Decision d = recognizer::decide(conf, cfg);
        const double maxc = std::max({conf[0], conf[1], conf[2]});
        CHECK(d.class_index.has_value() == (maxc >= cfg.confidence_threshold));
    }
}

TEST_CASE("decide is covariant under label permutation") {
    const RejectionConfig cfg;
    const std::vector<double> conf = {0.2, 0.5, 0.3};
    const Decision d = recognizer::decide(conf, cfg);
    const std::vector<double> rotated = {0.3, 0.2, 0.5};
    const Decision dr = recognizer::decide(rotated, cfg);
    REQUIRE(d.class_index.has_value());
    REQUIRE(dr.class_index.has_value());
    CHECK(*d.class_index == 1);
    CHECK(*dr.class_index == 2);
    CHECK(d.entropy == doctest::Approx(dr.entropy).epsilon(1e-12));
}

TEST_CASE("argmax ties break by class order") {
    const RejectionConfig cfg;
    const Decision d = recognizer::decide({0.5, 0.5}, cfg);
    REQUIRE(d.class_index.has_value());
    CHECK(*d.class_index == 0);
}

TEST_CASE("evaluate counts don't-know on trained classes as incorrect") {
    Rng rng(59);
    // Model trained on black vs white images via the grid extractor.
    auto extractor = std::make_shared<recognizer::GridPoolExtractor>();
    std::vector<TrainSample> samples;
    for (int i = 0; i < 10; ++i) {
        samples.push_back({extractor->extract(ImageRGB(16, 16, {0, 0, 0}), ""), "dark"});
        samples.push_back({extractor->extract(ImageRGB(16, 16, {255, 255, 255}), ""), "light"});
    }
    Model m = recognizer::train(samples, {}).model;
    m.extractor_impl = extractor;

    std::vector<recognizer::TestItem> test;
    test.push_back({ImageRGB(16, 16, {0, 0, 0}), "dark", "t0"});
    test.push_back({ImageRGB(16, 16, {255, 255, 255}), "light", "t1"});
    test.push_back({ImageRGB(16, 16, {0, 0, 0}), "light", "t2"});  // wrong label
    const auto ev = recognizer::evaluate(m, test, {});
    CHECK(ev.accuracy == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // An impossible confidence bar forces don't-know everywhere: accuracy 0
    // on trained classes.
    RejectionConfig strict;
    strict.confidence_threshold = 1.1;
    const auto rejected = recognizer::evaluate(m, test, strict);
    CHECK(rejected.accuracy == 0.0);
    for (const auto& o : rejected.outcomes) CHECK_FALSE(o.outcome.has_value());

    CHECK_THROWS_AS(recognizer::evaluate(m, {}, {}), Error);
}

TEST_CASE("cross_evaluate shapes and vocabulary checks") {
    auto extractor = std::make_shared<recognizer::GridPoolExtractor>();
    std::vector<TrainSample> samples;
    for (int i = 0; i < 6; ++i) {
        samples.push_back({extractor->extract(ImageRGB(16, 16, {0, 0, 0}), ""), "dark"});
        samples.push_back({extractor->extract(ImageRGB(16, 16, {255, 255, 255}), ""), "light"});
    }
    Model m = recognizer::train(samples, {}).model;
    m.extractor_impl = extractor;

    recognizer::NamedTestSet own;
    own.name = "own";
    own.items.push_back({ImageRGB(16, 16, {0, 0, 0}), "dark", "x"});

    const auto matrix = recognizer::cross_evaluate({m}, {"m0"}, {own}, {});
    REQUIRE(matrix.model_names.size() == 1);
    REQUIRE(matrix.set_names.size() == 1);
    CHECK(matrix.at(0, 0) == recognizer::evaluate(m, own.items, {}).accuracy);

    const auto empty = recognizer::cross_evaluate({}, {}, {own}, {});
    CHECK(empty.accuracy.empty());

    Model other = m;
    other.labels = {"dark", "shiny"};
    CHECK_THROWS_AS(recognizer::cross_evaluate({m, other}, {}, {own}, {}), Error);
}

}  // TEST_SUITE
