#include "teachset/serialize.hpp"

#include "teachset/error.hpp"

namespace teachset::serialize {

using nlohmann::json;

namespace {

std::array<std::uint8_t, 3> color_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw Error("expected a 3-element color array");
    return {j[0].get<std::uint8_t>(), j[1].get<std::uint8_t>(), j[2].get<std::uint8_t>()};
}

json color_to_json(const std::array<std::uint8_t, 3>& c) {
    return json::array({c[0], c[1], c[2]});
}

}  // namespace

json to_json(const geometry::Vec3& v) { return json::array({v.x, v.y, v.z}); }

geometry::Vec3 vec3_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw Error("expected a 3-element vector array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json to_json(const geometry::BBox& b) { return json::array({b.x0, b.y0, b.x1, b.y1}); }

geometry::BBox bbox_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw Error("expected a 4-element bbox array");
    geometry::BBox b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                     j[3].get<double>()};
    b.validate();
    return b;
}

json to_json(const geometry::CameraPose& pose) {
    return json{{"position", to_json(pose.position)}, {"view_dir", to_json(pose.view_dir)}};
}

geometry::CameraPose pose_from_json(const json& j) {
    geometry::CameraPose pose;
    pose.position = vec3_from_json(j.at("position"));
    pose.view_dir = vec3_from_json(j.at("view_dir"));
    pose.validate();
    return pose;
}

json to_json(const photodesc::PhotoDescriptors& d) {
    json j{{"small_object", d.small},
           {"cropped_object", d.cropped},
           {"blurry_photo", d.blurry},
           {"hand_in_photo", d.hand},
           {"object_missing", d.object_missing},
           {"blur_variance", d.blur_variance},
           {"hand_fraction", d.hand_fraction}};
    j["area_fraction"] = d.area_fraction ? json(*d.area_fraction) : json(nullptr);
    return j;
}

photodesc::PhotoDescriptors photo_descriptors_from_json(const json& j) {
    photodesc::PhotoDescriptors d;
    d.small = j.at("small_object").get<bool>();
    d.cropped = j.at("cropped_object").get<bool>();
    d.blurry = j.at("blurry_photo").get<bool>();
    d.hand = j.at("hand_in_photo").get<bool>();
    d.object_missing = j.at("object_missing").get<bool>();
    d.blur_variance = j.at("blur_variance").get<double>();
    d.hand_fraction = j.at("hand_fraction").get<double>();
    if (j.contains("area_fraction") && !j.at("area_fraction").is_null()) {
        d.area_fraction = j.at("area_fraction").get<double>();
    }
    return d;
}

json to_json(const setdesc::SetDescriptors& s) {
    json flags{{"small_object", s.flag_percentages.small},
               {"cropped_object", s.flag_percentages.cropped},
               {"blurry_photo", s.flag_percentages.blurry},
               {"hand_in_photo", s.flag_percentages.hand},
               {"object_missing", s.flag_percentages.object_missing}};
    json j{{"photo_count", s.photo_count},
           {"var_perspective_pct", s.var_perspective_pct},
           {"flags", std::move(flags)}};
    j["var_size_pct"] = s.var_size_pct ? json(*s.var_size_pct) : json(nullptr);
    j["var_background_pct"] = s.var_background_pct ? json(*s.var_background_pct) : json(nullptr);
    if (s.var_size_raw_pct || s.var_background_raw_pct) {
        json raw;
        if (s.var_size_raw_pct) raw["var_size_pct"] = *s.var_size_raw_pct;
        if (s.var_background_raw_pct) raw["var_background_pct"] = *s.var_background_raw_pct;
        j["raw"] = std::move(raw);
    }
    return j;
}

setdesc::SetDescriptors set_descriptors_from_json(const json& j) {
    setdesc::SetDescriptors s;
    s.photo_count = j.at("photo_count").get<std::size_t>();
    s.var_perspective_pct = j.at("var_perspective_pct").get<double>();
    if (j.contains("var_size_pct") && !j.at("var_size_pct").is_null()) {
        s.var_size_pct = j.at("var_size_pct").get<double>();
    }
    if (j.contains("var_background_pct") && !j.at("var_background_pct").is_null()) {
        s.var_background_pct = j.at("var_background_pct").get<double>();
    }
    if (j.contains("raw")) {
        const json& raw = j.at("raw");
        if (raw.contains("var_size_pct")) s.var_size_raw_pct = raw.at("var_size_pct").get<double>();
        if (raw.contains("var_background_pct")) {
            s.var_background_raw_pct = raw.at("var_background_pct").get<double>();
        }
    }
    const json& flags = j.at("flags");
    s.flag_percentages.small = flags.at("small_object").get<double>();
    s.flag_percentages.cropped = flags.at("cropped_object").get<double>();
    s.flag_percentages.blurry = flags.at("blurry_photo").get<double>();
    s.flag_percentages.hand = flags.at("hand_in_photo").get<double>();
    s.flag_percentages.object_missing = flags.value("object_missing", 0.0);
    return s;
}

json to_json(const metrics::PhotoAnnotation& a) {
    json j{{"cropped", a.cropped},
           {"hand", a.hand},
           {"blurry", a.blurry},
           {"background_group", a.background_group},
           {"perspective_group", a.perspective_group}};
    j["bbox"] = a.bbox ? to_json(*a.bbox) : json(nullptr);
    return j;
}

metrics::PhotoAnnotation annotation_from_json(const json& j) {
    metrics::PhotoAnnotation a;
    a.cropped = j.value("cropped", false);
    a.hand = j.value("hand", false);
    a.blurry = j.value("blurry", false);
    a.background_group = j.value("background_group", std::string{});
    a.perspective_group = j.value("perspective_group", std::string{});
    if (j.contains("bbox") && !j.at("bbox").is_null()) {
        a.bbox = bbox_from_json(j.at("bbox"));
    }
    return a;
}

json to_json(const metrics::SetAnnotationSummary& s) {
    return json{{"size_variation", s.size_variation},
                {"background_diversity", s.background_diversity},
                {"perspective_diversity", s.perspective_diversity},
                {"cropped_count", s.cropped_count},
                {"hand_count", s.hand_count},
                {"blurry_count", s.blurry_count},
                {"small_count", s.small_count},
                {"photo_count", s.photo_count}};
}

metrics::SetAnnotationSummary annotation_summary_from_json(const json& j) {
    metrics::SetAnnotationSummary s;
    s.size_variation = j.at("size_variation").get<double>();
    s.background_diversity = j.at("background_diversity").get<double>();
    s.perspective_diversity = j.at("perspective_diversity").get<double>();
    s.cropped_count = j.at("cropped_count").get<std::size_t>();
    s.hand_count = j.at("hand_count").get<std::size_t>();
    s.blurry_count = j.at("blurry_count").get<std::size_t>();
    s.small_count = j.at("small_count").get<std::size_t>();
    s.photo_count = j.value("photo_count", std::size_t{0});
    return s;
}

json to_json(const recognizer::Model& m) {
    json extractor{{"id", m.extractor.id}, {"params", json::object()}};
    for (const auto& [k, v] : m.extractor.params) extractor["params"][k] = v;
    return json{{"version", kSchemaVersion},
                {"labels", m.labels},
                {"dim", m.dim},
                {"extractor", std::move(extractor)},
                {"weights", m.weights},
                {"train_config",
                 {{"iterations", m.train_config.iterations},
                  {"learning_rate", m.train_config.learning_rate}}}};
}

recognizer::Model model_from_json(const json& j) {
    if (j.value("version", 0) != kSchemaVersion) {
        throw Error("model file: unsupported schema version");
    }
    recognizer::Model m;
    m.labels = j.at("labels").get<std::vector<std::string>>();
    m.dim = j.at("dim").get<std::size_t>();
    m.weights = j.at("weights").get<std::vector<double>>();
    if (m.labels.size() < 2) throw Error("model file: need at least two labels");
    if (m.weights.size() != m.labels.size() * (m.dim + 1)) {
        throw Error("model file: weight matrix shape mismatch");
    }
    const json& ex = j.at("extractor");
    m.extractor.id = ex.at("id").get<std::string>();
    if (ex.contains("params")) {
        for (const auto& [k, v] : ex.at("params").items()) {
            m.extractor.params[k] = v.get<std::string>();
        }
    }
    const json& tc = j.at("train_config");
    m.train_config.iterations = tc.at("iterations").get<int>();
    m.train_config.learning_rate = tc.at("learning_rate").get<double>();
    if (m.extractor.id == "grid8") {
        m.extractor_impl = std::make_shared<recognizer::GridPoolExtractor>();
        if (m.dim != recognizer::GridPoolExtractor::kDim) {
            throw Error("model file: grid8 extractor implies dim 192");
        }
    }
    return m;
}

json to_json(const recognizer::Evaluation& e) {
    json outcomes = json::array();
    for (const auto& o : e.outcomes) {
        outcomes.push_back(json{{"photo", o.photo_id},
                                {"truth", o.truth},
                                {"outcome", o.outcome ? json(*o.outcome) : json("dont_know")},
                                {"correct", o.correct}});
    }
    return json{{"accuracy", e.accuracy}, {"outcomes", std::move(outcomes)}};
}

json to_json(const scene::SceneSpec& spec) {
    json faces = json::array();
    for (const auto& f : spec.faces) {
        json fj{{"color", color_to_json(f.color)}, {"checker_cells", f.checker_cells}};
        fj["accent"] = f.accent ? color_to_json(*f.accent) : json(nullptr);
        faces.push_back(std::move(fj));
    }
    json background{{"color", color_to_json(spec.background.color)},
                    {"cell_px", spec.background.cell_px}};
    background["accent"] =
        spec.background.accent ? color_to_json(*spec.background.accent) : json(nullptr);
    json j{{"label", spec.label},
           {"center", to_json(spec.frame.center)},
           {"axes", json::array({to_json(spec.frame.axes[0]), to_json(spec.frame.axes[1]),
                                 to_json(spec.frame.axes[2])})},
           {"size", to_json(spec.size)},
           {"faces", std::move(faces)},
           {"background", std::move(background)},
           {"camera",
            {{"focal_px", spec.camera.focal_px},
             {"width", spec.camera.width},
             {"height", spec.camera.height}}}};
    j["hand_patch"] = spec.hand_patch
                          ? json{{"tone", color_to_json(spec.hand_patch->tone)},
                                 {"area_fraction", spec.hand_patch->area_fraction}}
                          : json(nullptr);
    j["blur_radius"] = spec.blur_radius ? json(*spec.blur_radius) : json(nullptr);
    if (!spec.background_group.empty()) j["background_group"] = spec.background_group;
    return j;
}

scene::SceneSpec scene_spec_from_json(const json& j) {
    scene::SceneSpec spec;
    spec.label = j.value("label", std::string("object"));
    if (j.contains("center")) spec.frame.center = vec3_from_json(j.at("center"));
    if (j.contains("axes")) {
        const json& axes = j.at("axes");
        if (!axes.is_array() || axes.size() != 3) throw Error("scene: axes must hold 3 vectors");
        for (int i = 0; i < 3; ++i) spec.frame.axes[i] = vec3_from_json(axes[i]);
    }
    if (j.contains("size")) spec.size = vec3_from_json(j.at("size"));
    if (j.contains("faces")) {
        const json& faces = j.at("faces");
        if (!faces.is_array() || faces.size() != 6) throw Error("scene: faces must hold 6 entries");
        for (int i = 0; i < 6; ++i) {
            const json& fj = faces[i];
            spec.faces[i].color = color_from_json(fj.at("color"));
            spec.faces[i].checker_cells = fj.value("checker_cells", 4);
            if (fj.contains("accent") && !fj.at("accent").is_null()) {
                spec.faces[i].accent = color_from_json(fj.at("accent"));
            }
        }
    }
    if (j.contains("background")) {
        const json& bg = j.at("background");
        spec.background.color = color_from_json(bg.at("color"));
        spec.background.cell_px = bg.value("cell_px", 12);
        if (bg.contains("accent") && !bg.at("accent").is_null()) {
            spec.background.accent = color_from_json(bg.at("accent"));
        }
    }
    if (j.contains("camera")) {
        const json& cam = j.at("camera");
        spec.camera.focal_px = cam.value("focal_px", 140.0);
        spec.camera.width = cam.value("width", 160);
        spec.camera.height = cam.value("height", 120);
    }
    if (j.contains("hand_patch") && !j.at("hand_patch").is_null()) {
        scene::HandPatch patch;
        patch.tone = color_from_json(j.at("hand_patch").at("tone"));
        patch.area_fraction = j.at("hand_patch").value("area_fraction", 0.004);
        spec.hand_patch = patch;
    }
    if (j.contains("blur_radius") && !j.at("blur_radius").is_null()) {
        spec.blur_radius = j.at("blur_radius").get<int>();
    }
    spec.background_group = j.value("background_group", std::string{});
    spec.validate();
    return spec;
}

json to_json(const session::TeachingPolicy& policy) {
    json sides = json::array();
    for (const auto s : policy.sides_to_visit) sides.push_back(std::string(geometry::side_name(s)));
    json rule = json::object();
    auto put = [&rule](const char* key, const std::optional<double>& v) {
        if (v) rule[key] = *v;
    };
    put("max_cropped_pct", policy.retrain_rule.max_cropped_pct);
    put("max_blurry_pct", policy.retrain_rule.max_blurry_pct);
    put("max_hand_pct", policy.retrain_rule.max_hand_pct);
    put("min_var_size_pct", policy.retrain_rule.min_var_size_pct);
    put("min_var_perspective_pct", policy.retrain_rule.min_var_perspective_pct);
    put("min_var_background_pct", policy.retrain_rule.min_var_background_pct);
    return json{{"position_jitter_m", policy.position_jitter_m},
                {"orientation_jitter_rad", policy.orientation_jitter_rad},
                {"crop_probability", policy.crop_probability},
                {"hand_probability", policy.hand_probability},
                {"blur_probability", policy.blur_probability},
                {"sides_to_visit", std::move(sides)},
                {"photos_per_object", policy.photos_per_object},
                {"objects", policy.objects},
                {"test_photos_per_object", policy.test_photos_per_object},
                {"camera_distance_m", policy.camera_distance_m},
                {"retrain_rule", std::move(rule)},
                {"max_retrains", policy.max_retrains},
                {"retrain_noise_scale", policy.retrain_noise_scale}};
}

session::TeachingPolicy teaching_policy_from_json(const json& j) {
    session::TeachingPolicy policy;
    policy.position_jitter_m = j.value("position_jitter_m", policy.position_jitter_m);
    policy.orientation_jitter_rad =
        j.value("orientation_jitter_rad", policy.orientation_jitter_rad);
    policy.crop_probability = j.value("crop_probability", policy.crop_probability);
    policy.hand_probability = j.value("hand_probability", policy.hand_probability);
    policy.blur_probability = j.value("blur_probability", policy.blur_probability);
    if (j.contains("sides_to_visit")) {
        policy.sides_to_visit.clear();
        for (const auto& s : j.at("sides_to_visit")) {
            policy.sides_to_visit.push_back(geometry::side_from_name(s.get<std::string>()));
        }
    }
    policy.photos_per_object = j.value("photos_per_object", policy.photos_per_object);
    policy.objects = j.value("objects", policy.objects);
    policy.test_photos_per_object =
        j.value("test_photos_per_object", policy.test_photos_per_object);
    policy.camera_distance_m = j.value("camera_distance_m", policy.camera_distance_m);
    policy.max_retrains = j.value("max_retrains", policy.max_retrains);
    policy.retrain_noise_scale = j.value("retrain_noise_scale", policy.retrain_noise_scale);
    if (j.contains("retrain_rule")) {
        const json& rule = j.at("retrain_rule");
        auto get = [&rule](const char* key) -> std::optional<double> {
            if (rule.contains(key) && !rule.at(key).is_null()) return rule.at(key).get<double>();
            return std::nullopt;
        };
        policy.retrain_rule.max_cropped_pct = get("max_cropped_pct");
        policy.retrain_rule.max_blurry_pct = get("max_blurry_pct");
        policy.retrain_rule.max_hand_pct = get("max_hand_pct");
        policy.retrain_rule.min_var_size_pct = get("min_var_size_pct");
        policy.retrain_rule.min_var_perspective_pct = get("min_var_perspective_pct");
        policy.retrain_rule.min_var_background_pct = get("min_var_background_pct");
    }
    policy.validate();
    return policy;
}

json session_log_to_json(const session::SessionLog& log) {
    json objects = json::array();
    for (const auto& obj : log.objects) {
        json attempts = json::array();
        for (const auto& att : obj.attempts) {
            json photos = json::array();
            for (const auto& p : att.photos) {
                photos.push_back(json{{"file", p.id},
                                      {"pose", to_json(p.pose)},
                                      {"annotation", to_json(p.annotation)},
                                      {"descriptors", to_json(p.descriptors)},
                                      {"spoken", p.spoken}});
            }
            attempts.push_back(json{{"decision", att.decision},
                                    {"summary", to_json(att.summary)},
                                    {"photos", std::move(photos)}});
        }
        objects.push_back(json{{"object_id", obj.object_id},
                               {"label", obj.label},
                               {"attempts", std::move(attempts)}});
    }
    json tests = json::array();
    for (const auto& t : log.test_photos) {
        tests.push_back(
            json{{"file", t.id}, {"truth", t.truth}, {"annotation", to_json(t.annotation)}});
    }
    return json{{"version", kSchemaVersion},
                {"seed", log.seed},
                {"objects", std::move(objects)},
                {"model", to_json(log.model)},
                {"test_photos", std::move(tests)},
                {"evaluation", to_json(log.evaluation)}};
}

}  // namespace teachset::serialize
