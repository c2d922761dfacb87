#include "teachset/imaging.hpp"

#include <algorithm>
#include <cmath>

#include "teachset/error.hpp"

namespace teachset::imaging {

ImageRGB::ImageRGB(int w, int h, std::array<std::uint8_t, 3> fill) : width(w), height(h) {
    if (w < 1 || h < 1) throw Error("ImageRGB: dimensions must be at least 1x1");
    data.resize(pixel_count() * 3);
    for (std::size_t i = 0; i < data.size(); i += 3) {
        data[i] = fill[0];
        data[i + 1] = fill[1];
        data[i + 2] = fill[2];
    }
}

ImageGray to_grayscale(const ImageRGB& img) {
    if (!img.valid()) throw Error("to_grayscale: invalid image buffer");
    ImageGray out;
    out.width = img.width;
    out.height = img.height;
    out.data.resize(img.pixel_count());
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        const std::uint8_t r = img.data[3 * i];
        const std::uint8_t g = img.data[3 * i + 1];
        const std::uint8_t b = img.data[3 * i + 2];
        const double luma = 0.299 * r + 0.587 * g + 0.114 * b;
        const double rounded = std::floor(luma + 0.5);
        out.data[i] = static_cast<std::uint8_t>(std::clamp(rounded, 0.0, 255.0));
    }
    return out;
}

EdgeMap laplacian(const ImageGray& gray) {
    if (gray.width < 1 || gray.height < 1 ||
        gray.data.size() != static_cast<std::size_t>(gray.width) * gray.height) {
        throw Error("laplacian: invalid grayscale buffer");
    }
    EdgeMap out;
    out.width = gray.width;
    out.height = gray.height;
    out.data.resize(gray.data.size());
    const int w = gray.width;
    const int h = gray.height;
    auto clamped = [&](int x, int y) -> std::int32_t {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return gray.at(x, y);
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::int32_t c = gray.at(x, y);
            out.data[static_cast<std::size_t>(y) * w + x] =
                clamped(x - 1, y) + clamped(x + 1, y) + clamped(x, y - 1) + clamped(x, y + 1) -
                4 * c;
        }
    }
    return out;
}

double variance(const EdgeMap& map) {
    if (map.data.empty()) throw Error("variance: empty edge map");
    double mean = 0.0;
    for (const std::int32_t v : map.data) mean += v;
    mean /= static_cast<double>(map.data.size());
    double acc = 0.0;
    for (const std::int32_t v : map.data) {
        const double d = v - mean;
        acc += d * d;
    }
    return acc / static_cast<double>(map.data.size());
}

double blur_score(const ImageRGB& img) {
    return variance(laplacian(to_grayscale(img)));
}

ImageRGB box_blur(const ImageRGB& img, int radius) {
    if (!img.valid()) throw Error("box_blur: invalid image buffer");
    if (radius < 0) throw Error("box_blur: negative radius");
    if (radius == 0) return img;
    const int w = img.width;
    const int h = img.height;
    const int side = 2 * radius + 1;

    // Separable passes; replicate padding matches the Laplacian convention.
    std::vector<double> horiz(img.data.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc[3] = {0, 0, 0};
            for (int dx = -radius; dx <= radius; ++dx) {
                const int sx = std::clamp(x + dx, 0, w - 1);
                const std::uint8_t* p = img.px(sx, y);
                acc[0] += p[0];
                acc[1] += p[1];
                acc[2] += p[2];
            }
            const std::size_t o = 3 * (static_cast<std::size_t>(y) * w + x);
            horiz[o] = acc[0] / side;
            horiz[o + 1] = acc[1] / side;
            horiz[o + 2] = acc[2] / side;
        }
    }
    ImageRGB out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc[3] = {0, 0, 0};
            for (int dy = -radius; dy <= radius; ++dy) {
                const int sy = std::clamp(y + dy, 0, h - 1);
                const std::size_t o = 3 * (static_cast<std::size_t>(sy) * w + x);
                acc[0] += horiz[o];
                acc[1] += horiz[o + 1];
                acc[2] += horiz[o + 2];
            }
            std::uint8_t* p = out.px(x, y);
            for (int c = 0; c < 3; ++c) {
                const double v = std::floor(acc[c] / side + 0.5);
                p[c] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
            }
        }
    }
    return out;
}

}  // namespace teachset::imaging
