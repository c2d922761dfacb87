#include "teachset/detect.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "teachset/error.hpp"

namespace teachset::detect {

const metrics::PhotoAnnotation& AnnotationStore::get(std::string_view photo_id) const {
    const auto it = records_.find(photo_id);
    if (it == records_.end()) {
        throw Error("no annotation for photo '" + std::string(photo_id) + "'");
    }
    return it->second;
}

OracleDetector::OracleDetector(std::shared_ptr<const AnnotationStore> store)
    : store_(std::move(store)) {
    if (!store_) throw Error("OracleDetector: null annotation store");
}

Detection OracleDetector::detect(const imaging::ImageRGB&, std::string_view photo_id) const {
    const metrics::PhotoAnnotation& ann = store_->get(photo_id);
    if (!ann.bbox) return Detection{std::nullopt, 0.0};
    return Detection{ann.bbox, 1.0};
}

OracleSegmenter::OracleSegmenter(std::shared_ptr<const AnnotationStore> store)
    : store_(std::move(store)) {
    if (!store_) throw Error("OracleSegmenter: null annotation store");
}

double OracleSegmenter::hand_fraction(const imaging::ImageRGB&, std::string_view photo_id) const {
    return store_->get(photo_id).hand ? 1.0 : 0.0;
}

HeuristicDetector::HeuristicDetector(HeuristicDetectorConfig cfg) : cfg_(cfg) {
    if (cfg_.color_distance < 0.0 || cfg_.min_area_fraction < 0.0) {
        throw Error("HeuristicDetector: thresholds must be >= 0");
    }
}

namespace {

std::array<std::uint8_t, 3> border_median(const imaging::ImageRGB& img) {
    std::vector<std::uint8_t> chan[3];
    const int w = img.width;
    const int h = img.height;
    auto push = [&](int x, int y) {
        const std::uint8_t* p = img.px(x, y);
        chan[0].push_back(p[0]);
        chan[1].push_back(p[1]);
        chan[2].push_back(p[2]);
    };
    for (int x = 0; x < w; ++x) {
        push(x, 0);
        if (h > 1) push(x, h - 1);
    }
    for (int y = 1; y + 1 < h; ++y) {
        push(0, y);
        if (w > 1) push(w - 1, y);
    }
    std::array<std::uint8_t, 3> med{};
    for (int c = 0; c < 3; ++c) {
        auto mid = chan[c].begin() + chan[c].size() / 2;
        std::nth_element(chan[c].begin(), mid, chan[c].end());
        med[c] = *mid;
    }
    return med;
}

double rgb_dist2(const std::uint8_t* p, const std::array<std::uint8_t, 3>& q) {
    const double dr = static_cast<double>(p[0]) - q[0];
    const double dg = static_cast<double>(p[1]) - q[1];
    const double db = static_cast<double>(p[2]) - q[2];
    return dr * dr + dg * dg + db * db;
}

}  // namespace

Detection HeuristicDetector::detect(const imaging::ImageRGB& img, std::string_view) const {
    if (!img.valid()) throw Error("HeuristicDetector: invalid image buffer");
    const int w = img.width;
    const int h = img.height;
    const std::array<std::uint8_t, 3> bg = border_median(img);
    const double thresh2 = cfg_.color_distance * cfg_.color_distance;

    std::vector<std::uint8_t> mask(img.pixel_count(), 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (rgb_dist2(img.px(x, y), bg) > thresh2) {
                mask[static_cast<std::size_t>(y) * w + x] = 1;
            }
        }
    }

    // Largest 4-connected component of the mask.
    std::vector<std::int32_t> label(mask.size(), -1);
    std::vector<std::size_t> stack;
    std::size_t best_area = 0;
    int best_minx = 0, best_maxx = 0, best_miny = 0, best_maxy = 0;
    std::int32_t next_label = 0;
    for (std::size_t start = 0; start < mask.size(); ++start) {
        if (!mask[start] || label[start] >= 0) continue;
        std::size_t area = 0;
        int minx = w, maxx = -1, miny = h, maxy = -1;
        stack.assign(1, start);
        label[start] = next_label;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            const int x = static_cast<int>(i % w);
            const int y = static_cast<int>(i / w);
            ++area;
            minx = std::min(minx, x);
            maxx = std::max(maxx, x);
            miny = std::min(miny, y);
            maxy = std::max(maxy, y);
            const int nx[4] = {x - 1, x + 1, x, x};
            const int ny[4] = {y, y, y - 1, y + 1};
            for (int k = 0; k < 4; ++k) {
                if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h) continue;
                const std::size_t j = static_cast<std::size_t>(ny[k]) * w + nx[k];
                if (mask[j] && label[j] < 0) {
                    label[j] = next_label;
                    stack.push_back(j);
                }
            }
        }
        if (area > best_area) {
            best_area = area;
            best_minx = minx;
            best_maxx = maxx;
            best_miny = miny;
            best_maxy = maxy;
        }
        ++next_label;
    }

    const double min_area = cfg_.min_area_fraction * static_cast<double>(img.pixel_count());
    if (best_area == 0 || static_cast<double>(best_area) < min_area) {
        return Detection{std::nullopt, 0.0};
    }
    geometry::BBox box{static_cast<double>(best_minx) / w, static_cast<double>(best_miny) / h,
                       static_cast<double>(best_maxx + 1) / w,
                       static_cast<double>(best_maxy + 1) / h};
    const double box_pixels =
        static_cast<double>(best_maxx - best_minx + 1) * (best_maxy - best_miny + 1);
    return Detection{box, static_cast<double>(best_area) / box_pixels};
}

const std::vector<std::array<std::uint8_t, 3>>& default_hand_tones() {
    static const std::vector<std::array<std::uint8_t, 3>> tones = {
        {224, 172, 105},
        {198, 134, 66},
        {141, 85, 36},
    };
    return tones;
}

ChromaSegmenter::ChromaSegmenter(ChromaSegmenterConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.tones.empty()) cfg_.tones = default_hand_tones();
    if (cfg_.distance < 0.0) throw Error("ChromaSegmenter: distance must be >= 0");
}

double ChromaSegmenter::hand_fraction(const imaging::ImageRGB& img, std::string_view) const {
    if (!img.valid()) throw Error("ChromaSegmenter: invalid image buffer");
    const double thresh2 = cfg_.distance * cfg_.distance;
    std::size_t matched = 0;
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const std::uint8_t* p = img.data.data() + 3 * i;
        for (const auto& tone : cfg_.tones) {
            if (rgb_dist2(p, tone) <= thresh2) {
                ++matched;
                break;
            }
        }
    }
    return static_cast<double>(matched) / static_cast<double>(img.pixel_count());
}

}  // namespace teachset::detect
