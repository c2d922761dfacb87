#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "teachset/error.hpp"
#include "teachset/imaging.hpp"
#include "teachset/rng.hpp"

using namespace teachset;
using imaging::EdgeMap;
using imaging::ImageGray;
using imaging::ImageRGB;

namespace {

// Brute-force Laplacian used as an independent oracle: explicit kernel loop
// with explicit clamping, no shared code with the implementation.
EdgeMap reference_laplacian(const ImageGray& g) {
    static const int kernel[3][3] = {{0, 1, 0}, {1, -4, 1}, {0, 1, 0}};
    EdgeMap out;
    out.width = g.width;
    out.height = g.height;
    out.data.resize(g.data.size());
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            long acc = 0;
            for (int ky = 0; ky < 3; ++ky) {
                for (int kx = 0; kx < 3; ++kx) {
                    int sx = x + kx - 1;
                    int sy = y + ky - 1;
                    sx = std::max(0, std::min(g.width - 1, sx));
                    sy = std::max(0, std::min(g.height - 1, sy));
                    acc += kernel[ky][kx] * static_cast<long>(g.at(sx, sy));
                }
            }
            out.data[static_cast<std::size_t>(y) * g.width + x] = static_cast<std::int32_t>(acc);
        }
    }
    return out;
}

ImageRGB random_image(Rng& rng, int w, int h) {
    ImageRGB img(w, h);
    for (auto& byte : img.data) byte = static_cast<std::uint8_t>(rng.below(256));
    return img;
}

ImageRGB mirror_horizontal(const ImageRGB& img) {
    ImageRGB out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::uint8_t* s = img.px(img.width - 1 - x, y);
            std::copy(s, s + 3, out.px(x, y));
        }
    }
    return out;
}

ImageRGB mirror_vertical(const ImageRGB& img) {
    ImageRGB out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::uint8_t* s = img.px(x, img.height - 1 - y);
            std::copy(s, s + 3, out.px(x, y));
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("imaging") {

TEST_CASE("grayscale of uniform images") {
    const ImageRGB white(4, 3, {255, 255, 255});
    for (const auto v : imaging::to_grayscale(white).data) CHECK(v == 255);
    const ImageRGB black(4, 3, {0, 0, 0});
    for (const auto v : imaging::to_grayscale(black).data) CHECK(v == 0);
}

TEST_CASE("grayscale weights, half-up rounding") {
    const ImageRGB red(1, 1, {255, 0, 0});
    CHECK(imaging::to_grayscale(red).data[0] == 76);  // round(0.299 * 255)
    const ImageRGB green(1, 1, {0, 255, 0});
    CHECK(imaging::to_grayscale(green).data[0] == 150);  // round(0.587 * 255) = round(149.685)
    const ImageRGB blue(1, 1, {0, 0, 255});
    CHECK(imaging::to_grayscale(blue).data[0] == 29);  // round(0.114 * 255) = round(29.07)
}

TEST_CASE("laplacian of constant image is identically zero") {
    ImageGray g;
    g.width = 5;
    g.height = 4;
    g.data.assign(20, 137);
    for (const auto v : imaging::laplacian(g).data) CHECK(v == 0);
}

TEST_CASE("laplacian of 1x1 image is zero") {
    ImageGray g;
    g.width = 1;
    g.height = 1;
    g.data = {200};
    CHECK(imaging::laplacian(g).data[0] == 0);
}

TEST_CASE("laplacian of centered spike") {
    ImageGray g;
    g.width = 3;
    g.height = 3;
    g.data = {0, 0, 0, 0, 255, 0, 0, 0, 0};
    const EdgeMap e = imaging::laplacian(g);
    CHECK(e.data[4] == -1020);
    CHECK(e.data[1] == 255);
    CHECK(e.data[3] == 255);
    CHECK(e.data[5] == 255);
    CHECK(e.data[7] == 255);
    CHECK(e.data[0] == 0);
    CHECK(e.data[2] == 0);
    CHECK(e.data[6] == 0);
    CHECK(e.data[8] == 0);
}

TEST_CASE("laplacian matches brute-force reference on random images") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int w = 1 + static_cast<int>(rng.below(12));
        const int h = 1 + static_cast<int>(rng.below(12));
        const ImageRGB img = random_image(rng, w, h);
        const ImageGray g = imaging::to_grayscale(img);
        CHECK(imaging::laplacian(g).data == reference_laplacian(g).data);
    }
}

TEST_CASE("variance basics") {
    EdgeMap zero;
    zero.width = 2;
    zero.height = 2;
    zero.data = {0, 0, 0, 0};
    CHECK(imaging::variance(zero) == 0.0);

    EdgeMap pm;
    pm.width = 2;
    pm.height = 1;
    pm.data = {-1, 1};
    CHECK(imaging::variance(pm) == doctest::Approx(1.0).epsilon(1e-12));

    EdgeMap constant;
    constant.width = 3;
    constant.height = 1;
    constant.data = {2, 2, 2};
    CHECK(imaging::variance(constant) == 0.0);

    EdgeMap empty;
    CHECK_THROWS_AS(imaging::variance(empty), Error);
}

TEST_CASE("blur score of constant image is zero") {
    const ImageRGB gray(16, 16, {90, 90, 90});
    CHECK(imaging::blur_score(gray) == 0.0);
}

TEST_CASE("blur score of 8x8 vertical stripes") {
    ImageRGB img(8, 8);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            const std::uint8_t v = (x % 2 == 0) ? 0 : 255;
            img.px(x, y)[0] = img.px(x, y)[1] = img.px(x, y)[2] = v;
        }
    }
    // Oracle: brute-force Laplacian, population variance by direct sums.
    const EdgeMap ref = reference_laplacian(imaging::to_grayscale(img));
    double mean = 0.0;
    for (const auto v : ref.data) mean += v;
    mean /= static_cast<double>(ref.data.size());
    double var = 0.0;
    for (const auto v : ref.data) var += (v - mean) * (v - mean);
    var /= static_cast<double>(ref.data.size());
    CHECK(var == doctest::Approx(211331.25).epsilon(1e-12));

    const double score = imaging::blur_score(img);
    CHECK(score == doctest::Approx(var).epsilon(1e-12));
    CHECK(score > 3.0);  // sharp at the default threshold
}

TEST_CASE("blur score is invariant under mirroring and never negative") {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const ImageRGB img = random_image(rng, 9, 7);
        const double s = imaging::blur_score(img);
        CHECK(s >= 0.0);
        CHECK(imaging::blur_score(mirror_horizontal(img)) == doctest::Approx(s).epsilon(1e-12));
        CHECK(imaging::blur_score(mirror_vertical(img)) == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("3x3 mean filtering never increases the blur score") {
    Rng rng(47);
    for (int trial = 0; trial < 100; ++trial) {
        const ImageRGB img = random_image(rng, 32, 32);
        const ImageRGB smoothed = imaging::box_blur(img, 1);
        CHECK(imaging::blur_score(smoothed) <= imaging::blur_score(img));
    }
}

TEST_CASE("box blur of constant image is the same image") {
    const ImageRGB img(10, 6, {13, 200, 96});
    CHECK(imaging::box_blur(img, 3).data == img.data);
}

}  // TEST_SUITE
