#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teachset/annotation.hpp"
#include "teachset/geometry.hpp"
#include "teachset/imaging.hpp"

namespace teachset::detect {

/// Outcome of object detection. No bbox means no detection, and the
/// confidence is then 0.
struct Detection {
    std::optional<geometry::BBox> bbox;
    double confidence = 0.0;
};

/// Object detector interface. Implementations must be deterministic for
/// identical input and safely shareable across concurrent callers.
class DetectorBackend {
public:
    virtual ~DetectorBackend() = default;
    virtual Detection detect(const imaging::ImageRGB& img, std::string_view photo_id) const = 0;
};

/// Hand segmenter interface; returns the fraction of hand pixels in [0, 1].
class SegmenterBackend {
public:
    virtual ~SegmenterBackend() = default;
    virtual double hand_fraction(const imaging::ImageRGB& img, std::string_view photo_id) const = 0;
};

/// Read-only store of ground-truth annotations keyed by photo id.
class AnnotationStore {
public:
    AnnotationStore() = default;

    void put(std::string photo_id, metrics::PhotoAnnotation annotation) {
        records_.insert_or_assign(std::move(photo_id), std::move(annotation));
    }
    /// Throws teachset::Error naming the photo when no record exists.
    const metrics::PhotoAnnotation& get(std::string_view photo_id) const;
    bool contains(std::string_view photo_id) const {
        return records_.find(photo_id) != records_.end();
    }
    std::size_t size() const { return records_.size(); }

private:
    std::map<std::string, metrics::PhotoAnnotation, std::less<>> records_;
};

/// Detector that reads the annotated bbox instead of estimating one.
/// Returns the annotation's bbox with confidence 1, or no-detection when the
/// annotation carries no bbox.
class OracleDetector final : public DetectorBackend {
public:
    explicit OracleDetector(std::shared_ptr<const AnnotationStore> store);
    Detection detect(const imaging::ImageRGB& img, std::string_view photo_id) const override;

private:
    std::shared_ptr<const AnnotationStore> store_;
};

/// Segmenter that reads the annotated hand flag: 1.0 when a hand is annotated,
/// 0.0 otherwise.
class OracleSegmenter final : public SegmenterBackend {
public:
    explicit OracleSegmenter(std::shared_ptr<const AnnotationStore> store);
    double hand_fraction(const imaging::ImageRGB& img, std::string_view photo_id) const override;

private:
    std::shared_ptr<const AnnotationStore> store_;
};

struct HeuristicDetectorConfig {
    double color_distance = 60.0;      // Euclidean RGB distance from background
    double min_area_fraction = 0.001;  // smallest accepted component, fraction of pixels
};

/// Classical single-object detector: estimates the background color as the
/// per-channel median of the 1-pixel border, marks pixels far from it, and
/// boxes the largest 4-connected marked component.
class HeuristicDetector final : public DetectorBackend {
public:
    explicit HeuristicDetector(HeuristicDetectorConfig cfg = {});
    Detection detect(const imaging::ImageRGB& img, std::string_view photo_id) const override;

private:
    HeuristicDetectorConfig cfg_;
};

struct ChromaSegmenterConfig {
    std::vector<std::array<std::uint8_t, 3>> tones;  // reference hand tones
    double distance = 40.0;                          // RGB distance accepted as a match
};

/// Hand tones the chroma segmenter matches by default.
const std::vector<std::array<std::uint8_t, 3>>& default_hand_tones();

/// Counts pixels within an RGB distance of any reference tone.
class ChromaSegmenter final : public SegmenterBackend {
public:
    explicit ChromaSegmenter(ChromaSegmenterConfig cfg = {{}, 40.0});
    double hand_fraction(const imaging::ImageRGB& img, std::string_view photo_id) const override;

private:
    ChromaSegmenterConfig cfg_;
};

}  // namespace teachset::detect
