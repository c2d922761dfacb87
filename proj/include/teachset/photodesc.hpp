#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teachset/detect.hpp"
#include "teachset/geometry.hpp"
#include "teachset/imaging.hpp"

namespace teachset::photodesc {

/// Thresholds for the photo-level descriptors. Defaults follow the published
/// estimator settings: 1/8 area bound, blur variance 3.0, hand fraction 0.3%.
/// The blur threshold was tuned at one capture resolution and may not transfer
/// to others; it is configuration, not a constant.
struct PhotoDescConfig {
    double small_fraction = 0.125;
    double blur_threshold = 3.0;
    double hand_threshold = 0.003;
    double edge_eps = 0.005;

    void validate() const;
};

/// Photo-level descriptors plus the raw measures they were derived from.
struct PhotoDescriptors {
    bool small = false;
    bool cropped = false;
    bool blurry = false;
    bool hand = false;
    bool object_missing = false;
    std::optional<double> area_fraction;  // present iff an object was detected
    double blur_variance = 0.0;
    double hand_fraction = 0.0;
};

/// Pure threshold logic: flags from raw measures. Strict inequalities
/// throughout: small iff area < small_fraction, blurry iff variance <
/// blur_threshold, hand iff fraction > hand_threshold. No detection yields
/// object_missing with small and cropped both false.
PhotoDescriptors flags_from_measures(const std::optional<geometry::BBox>& bbox,
                                     double blur_variance, double hand_fraction,
                                     const PhotoDescConfig& cfg);

/// Runs the full photo-level pipeline: detector, segmenter, and blur score.
/// Backend errors are rethrown with the photo identity attached.
PhotoDescriptors describe_photo(const imaging::ImageRGB& img,
                                const detect::DetectorBackend& detector,
                                const detect::SegmenterBackend& segmenter,
                                const PhotoDescConfig& cfg, std::string_view photo_id = {});

/// Names of the true flags among {small, cropped, blurry, hand}, in that fixed
/// order. Empty when nothing is flagged; descriptors are only spoken when true.
std::vector<std::string> spoken_flags(const PhotoDescriptors& d);

}  // namespace teachset::photodesc
