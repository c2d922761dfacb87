#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "teachset/geometry.hpp"
#include "teachset/photodesc.hpp"

namespace teachset::setdesc {

/// Scaling for the set-level descriptors: SD_max normalizes the position and
/// orientation spreads, side_scale is the percent awarded per distinct side.
struct SetDescConfig {
    double sd_max = 0.15;
    double side_scale = 15.0;
    bool clamp_at_100 = true;

    void validate() const;  // sd_max must be > 0
};

/// Percentage of photos carrying each photo-level flag.
struct FlagPercentages {
    double small = 0.0;
    double cropped = 0.0;
    double blurry = 0.0;
    double hand = 0.0;
    double object_missing = 0.0;
};

/// Set-level descriptors. The pose-derived variations are absent when no
/// poses were available; raw values keep the unclamped percentages.
struct SetDescriptors {
    std::size_t photo_count = 0;
    std::optional<double> var_size_pct;
    double var_perspective_pct = 0.0;
    std::optional<double> var_background_pct;
    std::optional<double> var_size_raw_pct;
    std::optional<double> var_background_raw_pct;
    FlagPercentages flag_percentages;
};

/// Population spread of camera positions: RMS Euclidean distance from the
/// centroid. Order-free.
double position_spread(const std::vector<geometry::Vec3>& positions);

/// Population SD over photos of (1 - cos(view_dir_i, mean view direction)),
/// the mean direction normalized. Throws when the directions cancel out.
double orientation_spread(const std::vector<geometry::CameraPose>& poses);

/// position_spread / sd_max * 100, clamped to [0, 100] when configured.
double variation_in_size(const std::vector<geometry::Vec3>& positions,
                         const SetDescConfig& cfg);

/// Distinct sides seen across the set, times side_scale percent. An empty
/// list (no side resolved) yields 0.
double variation_in_perspective(const std::vector<geometry::Side>& sides,
                                const SetDescConfig& cfg);

/// max(position spread, orientation spread) / sd_max * 100, clamped when
/// configured. Camera motion stands in for background change.
double variation_in_background(const std::vector<geometry::CameraPose>& poses,
                               const SetDescConfig& cfg);

/// Percent of photos with each flag set. Errors on an empty list.
FlagPercentages aggregate_flags(const std::vector<photodesc::PhotoDescriptors>& descriptors);

/// Bundles the set-level descriptors for one training set. Poses are optional;
/// when absent the pose-derived variations are reported as unavailable. The
/// sides list holds only the resolved sides and may be shorter than the set.
SetDescriptors set_summary(const std::vector<photodesc::PhotoDescriptors>& descriptors,
                           const std::optional<std::vector<geometry::CameraPose>>& poses,
                           const std::vector<geometry::Side>& sides,
                           const SetDescConfig& cfg);

}  // namespace teachset::setdesc
