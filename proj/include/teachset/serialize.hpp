#pragma once

#include <json.hpp>

#include "teachset/annotation.hpp"
#include "teachset/geometry.hpp"
#include "teachset/metrics.hpp"
#include "teachset/photodesc.hpp"
#include "teachset/recognizer.hpp"
#include "teachset/scene.hpp"
#include "teachset/session.hpp"
#include "teachset/setdesc.hpp"

/// JSON encodings shared by the CLI, the log writer, and the HTTP service so
/// every surface emits byte-identical records for the same values. Schemas are
/// additive: fields may be added, never renamed or removed, with breaking
/// changes gated by the top-level "version" fields.
namespace teachset::serialize {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const geometry::Vec3& v);
geometry::Vec3 vec3_from_json(const nlohmann::json& j);

nlohmann::json to_json(const geometry::BBox& b);
geometry::BBox bbox_from_json(const nlohmann::json& j);

nlohmann::json to_json(const geometry::CameraPose& pose);
geometry::CameraPose pose_from_json(const nlohmann::json& j);

nlohmann::json to_json(const photodesc::PhotoDescriptors& d);
photodesc::PhotoDescriptors photo_descriptors_from_json(const nlohmann::json& j);

nlohmann::json to_json(const setdesc::SetDescriptors& s);
setdesc::SetDescriptors set_descriptors_from_json(const nlohmann::json& j);

nlohmann::json to_json(const metrics::PhotoAnnotation& a);
metrics::PhotoAnnotation annotation_from_json(const nlohmann::json& j);

nlohmann::json to_json(const metrics::SetAnnotationSummary& s);
metrics::SetAnnotationSummary annotation_summary_from_json(const nlohmann::json& j);

nlohmann::json to_json(const recognizer::Model& m);
recognizer::Model model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const recognizer::Evaluation& e);

nlohmann::json to_json(const scene::SceneSpec& spec);
scene::SceneSpec scene_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const session::TeachingPolicy& policy);
session::TeachingPolicy teaching_policy_from_json(const nlohmann::json& j);

/// The deterministic session manifest; timings are deliberately not part of it.
nlohmann::json session_log_to_json(const session::SessionLog& log);

}  // namespace teachset::serialize
