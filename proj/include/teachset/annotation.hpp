#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "teachset/geometry.hpp"

namespace teachset::metrics {

/// Ground-truth attributes of one training photo, as a human coder would
/// assign them. Group ids are opaque labels; equality is the only operation.
struct PhotoAnnotation {
    bool cropped = false;
    bool hand = false;
    bool blurry = false;
    std::optional<geometry::BBox> bbox;
    std::string background_group;
    std::string perspective_group;
};

/// Per-set rollup of the annotations: diversity indices, size variation, and
/// counts of flagged photos.
struct SetAnnotationSummary {
    double size_variation = 0.0;        // population SD of bbox area fractions
    double background_diversity = 0.0;  // Shannon-Wiener H over background groups
    double perspective_diversity = 0.0; // Shannon-Wiener H over perspective groups
    std::size_t cropped_count = 0;
    std::size_t hand_count = 0;
    std::size_t blurry_count = 0;
    std::size_t small_count = 0;
    std::size_t photo_count = 0;
};

}  // namespace teachset::metrics
