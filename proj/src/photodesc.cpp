#include "teachset/photodesc.hpp"

#include <exception>

#include "teachset/error.hpp"

namespace teachset::photodesc {

void PhotoDescConfig::validate() const {
    if (small_fraction < 0.0 || small_fraction > 1.0) {
        throw Error("PhotoDescConfig: small_fraction must be in [0, 1]");
    }
    if (blur_threshold < 0.0 || hand_threshold < 0.0 || edge_eps < 0.0) {
        throw Error("PhotoDescConfig: thresholds must be >= 0");
    }
}

PhotoDescriptors flags_from_measures(const std::optional<geometry::BBox>& bbox,
                                     double blur_variance, double hand_fraction,
                                     const PhotoDescConfig& cfg) {
    cfg.validate();
    PhotoDescriptors d;
    d.blur_variance = blur_variance;
    d.hand_fraction = hand_fraction;
    d.blurry = blur_variance < cfg.blur_threshold;
    d.hand = hand_fraction > cfg.hand_threshold;
    if (bbox) {
        const double area = geometry::bbox_area_fraction(*bbox);
        d.area_fraction = area;
        d.small = area < cfg.small_fraction;
        d.cropped = geometry::bbox_touches_edge(*bbox, cfg.edge_eps);
    } else {
        d.object_missing = true;
    }
    return d;
}

PhotoDescriptors describe_photo(const imaging::ImageRGB& img,
                                const detect::DetectorBackend& detector,
                                const detect::SegmenterBackend& segmenter,
                                const PhotoDescConfig& cfg, std::string_view photo_id) {
    try {
        const detect::Detection det = detector.detect(img, photo_id);
        const double blur = imaging::blur_score(img);
        const double hand = segmenter.hand_fraction(img, photo_id);
        return flags_from_measures(det.bbox, blur, hand, cfg);
    } catch (const std::exception& e) {
        if (photo_id.empty()) throw;
        throw Error("describe_photo('" + std::string(photo_id) + "'): " + e.what());
    }
}

std::vector<std::string> spoken_flags(const PhotoDescriptors& d) {
    std::vector<std::string> out;
    if (d.small) out.emplace_back("small");
    if (d.cropped) out.emplace_back("cropped");
    if (d.blurry) out.emplace_back("blurry");
    if (d.hand) out.emplace_back("hand");
    return out;
}

}  // namespace teachset::photodesc
