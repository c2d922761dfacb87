#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace teachset::imaging {

/// 8-bit RGB image, row-major, three bytes per pixel.
struct ImageRGB {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    ImageRGB() = default;
    ImageRGB(int w, int h, std::array<std::uint8_t, 3> fill = {0, 0, 0});

    std::uint8_t* px(int x, int y) {
        return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
    const std::uint8_t* px(int x, int y) const {
        return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    bool valid() const {
        return width >= 1 && height >= 1 && data.size() == pixel_count() * 3;
    }
};

/// 8-bit grayscale image.
struct ImageGray {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    std::uint8_t at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
};

/// Signed Laplacian responses; values stay within [-1020, 1020] for 8-bit input.
struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> data;
};

/// BT.601 luma with half-up rounding, clamped to [0, 255].
ImageGray to_grayscale(const ImageRGB& img);

/// 4-neighbor Laplacian [[0,1,0],[1,-4,1],[0,1,0]] with replicate border padding.
/// Output dimensions equal input dimensions.
EdgeMap laplacian(const ImageGray& gray);

/// Population variance (divide by N) of all responses.
double variance(const EdgeMap& map);

/// variance(laplacian(to_grayscale(img))). Callers compare against a blur
/// threshold; a photo is blurry iff the score is strictly below it.
double blur_score(const ImageRGB& img);

/// Box filter of side (2*radius+1) with replicate border padding.
/// radius 0 returns the input unchanged.
ImageRGB box_blur(const ImageRGB& img, int radius);

}  // namespace teachset::imaging
