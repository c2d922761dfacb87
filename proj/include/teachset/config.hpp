#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "teachset/detect.hpp"
#include "teachset/photodesc.hpp"
#include "teachset/recognizer.hpp"
#include "teachset/setdesc.hpp"

namespace teachset::io {

/// Which detector / segmenter implementations the pipelines should use.
/// "oracle" backends read annotations (from a manifest or the simulator);
/// "heuristic" / "chroma" estimate from pixels.
struct BackendConfig {
    std::string detector = "heuristic";  // "heuristic" | "oracle"
    std::string segmenter = "chroma";    // "chroma" | "oracle"
    detect::HeuristicDetectorConfig heuristic;
    detect::ChromaSegmenterConfig chroma{{}, 40.0};
};

/// Toolkit-wide configuration: descriptor thresholds, training and rejection
/// settings, and backend selection. Loaded from a JSON file; every field is
/// optional and falls back to the published defaults.
struct ToolkitConfig {
    photodesc::PhotoDescConfig photo;
    setdesc::SetDescConfig set;
    recognizer::TrainConfig train;
    recognizer::RejectionConfig rejection;
    BackendConfig backends;

    void validate() const;
};

ToolkitConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ToolkitConfig& cfg);
ToolkitConfig load_config(const std::filesystem::path& path);

/// Instantiates the configured backends. Oracle backends require an
/// annotation store and throw without one.
std::shared_ptr<const detect::DetectorBackend> make_detector(
    const BackendConfig& cfg, std::shared_ptr<const detect::AnnotationStore> store);
std::shared_ptr<const detect::SegmenterBackend> make_segmenter(
    const BackendConfig& cfg, std::shared_ptr<const detect::AnnotationStore> store);

}  // namespace teachset::io
