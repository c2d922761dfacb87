#include "teachset/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "teachset/error.hpp"
#include "teachset/serialize.hpp"

namespace teachset::io {

using nlohmann::json;

SetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(path.string() + ": cannot open manifest");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(path.string() + ": invalid JSON: " + e.what());
    }
    SetManifest manifest;
    manifest.label = j.value("label", std::string{});
    if (manifest.label.empty()) throw Error(path.string() + ": manifest needs a label");
    if (!j.contains("photos") || !j.at("photos").is_array()) {
        throw Error(path.string() + ": manifest needs a photos array");
    }
    if (j.contains("object_frame") && !j.at("object_frame").is_null()) {
        const json& fj = j.at("object_frame");
        geometry::ObjectFrame frame;
        frame.center = serialize::vec3_from_json(fj.at("center"));
        if (fj.contains("axes")) {
            const json& axes = fj.at("axes");
            if (!axes.is_array() || axes.size() != 3) {
                throw Error(path.string() + ": object_frame.axes must hold 3 vectors");
            }
            for (int i = 0; i < 3; ++i) frame.axes[i] = serialize::vec3_from_json(axes[i]);
        }
        frame.validate();
        manifest.object_frame = frame;
    }
    const std::filesystem::path base = path.parent_path();
    for (const auto& pj : j.at("photos")) {
        ManifestPhoto photo;
        photo.path = pj.at("path").get<std::string>();
        const std::filesystem::path raw(photo.path);
        photo.resolved_path = raw.is_absolute() ? raw : base / raw;
        if (pj.contains("pose") && !pj.at("pose").is_null()) {
            photo.pose = serialize::pose_from_json(pj.at("pose"));
        }
        if (pj.contains("annotation") && !pj.at("annotation").is_null()) {
            photo.annotation = serialize::annotation_from_json(pj.at("annotation"));
        }
        manifest.photos.push_back(std::move(photo));
    }
    return manifest;
}

void save_manifest(const std::filesystem::path& path, const SetManifest& manifest) {
    json photos = json::array();
    for (const auto& p : manifest.photos) {
        json pj{{"path", p.path}};
        if (p.pose) pj["pose"] = serialize::to_json(*p.pose);
        if (p.annotation) pj["annotation"] = serialize::to_json(*p.annotation);
        photos.push_back(std::move(pj));
    }
    json j{{"label", manifest.label}, {"photos", std::move(photos)}};
    if (manifest.object_frame) {
        j["object_frame"] = json{
            {"center", serialize::to_json(manifest.object_frame->center)},
            {"axes", json::array({serialize::to_json(manifest.object_frame->axes[0]),
                                  serialize::to_json(manifest.object_frame->axes[1]),
                                  serialize::to_json(manifest.object_frame->axes[2])})}};
    }
    std::ofstream out(path);
    if (!out) throw Error(path.string() + ": cannot write manifest");
    out << j.dump(2) << "\n";
}

std::shared_ptr<detect::AnnotationStore> annotation_store_from_manifests(
    const std::vector<SetManifest>& manifests) {
    auto store = std::make_shared<detect::AnnotationStore>();
    for (const auto& m : manifests) {
        for (const auto& p : m.photos) {
            if (p.annotation) store->put(p.path, *p.annotation);
        }
    }
    return store;
}

}  // namespace teachset::io
