#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "teachset/annotation.hpp"
#include "teachset/detect.hpp"
#include "teachset/geometry.hpp"

namespace teachset::io {

/// One photo entry of a set manifest. The path is stored as written in the
/// manifest and doubles as the photo id; resolved_path is absolute.
struct ManifestPhoto {
    std::string path;
    std::filesystem::path resolved_path;
    std::optional<geometry::CameraPose> pose;
    std::optional<metrics::PhotoAnnotation> annotation;
};

/// A labeled training (or test) set: photo paths with optional poses and
/// annotations. The optional object frame lets the describe pipeline resolve
/// which object side each posed photo shows.
struct SetManifest {
    std::string label;
    std::optional<geometry::ObjectFrame> object_frame;
    std::vector<ManifestPhoto> photos;
};

/// Loads a manifest JSON file. Relative photo paths resolve against the
/// manifest's directory.
SetManifest load_manifest(const std::filesystem::path& path);

void save_manifest(const std::filesystem::path& path, const SetManifest& manifest);

/// Collects the manifest's annotations into a store keyed by photo id.
std::shared_ptr<detect::AnnotationStore> annotation_store_from_manifests(
    const std::vector<SetManifest>& manifests);

}  // namespace teachset::io
