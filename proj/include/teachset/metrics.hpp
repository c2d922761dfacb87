#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "teachset/annotation.hpp"
#include "teachset/geometry.hpp"
#include "teachset/setdesc.hpp"

namespace teachset::metrics {

/// Shannon-Wiener diversity index H = -sum p_i ln p_i over group proportions,
/// natural log. Zero when everything falls in one group, ln k for k equal
/// groups. Errors on an empty list.
double shannon_wiener(const std::vector<std::string>& groups);

/// Population SD of the bounding-box area fractions; an absent box counts as
/// proportion 0 (the object was not captured). Errors on an empty list.
double annotated_size_variation(const std::vector<std::optional<geometry::BBox>>& bboxes);

/// True iff a box is present and covers less than 12.5% of the photo.
bool annotated_small(const std::optional<geometry::BBox>& bbox);

/// Pearson r, or an undefined result when either series has zero variance.
/// Undefined is a value, not an error; it mirrors descriptors that never vary
/// across a corpus.
struct Correlation {
    double r = 0.0;
    bool defined = false;
    std::size_t n = 0;
};

Correlation pearson(const std::vector<double>& xs, const std::vector<double>& ys);

/// One row per descriptor pairing of estimated vs annotated values.
struct DescriptorCorrelation {
    std::string descriptor;
    Correlation correlation;
};

/// Pearson r for each descriptor pairing across sets: size, background, and
/// perspective variation against their annotated counterparts, and the
/// cropped/hand/blurry/small percentages against annotated counts. Requires at
/// least two pairs. Sets lacking pose-derived estimates are skipped for the
/// pose-derived rows.
std::vector<DescriptorCorrelation> correlate_descriptors(
    const std::vector<std::pair<setdesc::SetDescriptors, SetAnnotationSummary>>& pairs);

/// Rolls per-photo annotations up to a SetAnnotationSummary: diversity of the
/// background and perspective groups, size variation, and flag counts.
SetAnnotationSummary summarize_annotations(const std::vector<PhotoAnnotation>& photos);

}  // namespace teachset::metrics
