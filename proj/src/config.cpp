#include "teachset/config.hpp"

#include <fstream>

#include "teachset/error.hpp"

namespace teachset::io {

using nlohmann::json;

void ToolkitConfig::validate() const {
    photo.validate();
    set.validate();
    train.validate();
    rejection.validate();
    if (backends.detector != "heuristic" && backends.detector != "oracle") {
        throw Error("config: detector must be 'heuristic' or 'oracle'");
    }
    if (backends.segmenter != "chroma" && backends.segmenter != "oracle") {
        throw Error("config: segmenter must be 'chroma' or 'oracle'");
    }
}

ToolkitConfig config_from_json(const json& j) {
    ToolkitConfig cfg;
    if (j.contains("photo")) {
        const json& p = j.at("photo");
        cfg.photo.small_fraction = p.value("small_fraction", cfg.photo.small_fraction);
        cfg.photo.blur_threshold = p.value("blur_threshold", cfg.photo.blur_threshold);
        cfg.photo.hand_threshold = p.value("hand_threshold", cfg.photo.hand_threshold);
        cfg.photo.edge_eps = p.value("edge_eps", cfg.photo.edge_eps);
    }
    if (j.contains("set")) {
        const json& s = j.at("set");
        cfg.set.sd_max = s.value("sd_max", cfg.set.sd_max);
        cfg.set.side_scale = s.value("side_scale", cfg.set.side_scale);
        cfg.set.clamp_at_100 = s.value("clamp_at_100", cfg.set.clamp_at_100);
    }
    if (j.contains("train")) {
        const json& t = j.at("train");
        cfg.train.iterations = t.value("iterations", cfg.train.iterations);
        cfg.train.learning_rate = t.value("learning_rate", cfg.train.learning_rate);
    }
    if (j.contains("rejection")) {
        const json& r = j.at("rejection");
        cfg.rejection.entropy_threshold =
            r.value("entropy_threshold", cfg.rejection.entropy_threshold);
        cfg.rejection.confidence_threshold =
            r.value("confidence_threshold", cfg.rejection.confidence_threshold);
        const std::string base = r.value("log_base", std::string("natural"));
        if (base == "natural") {
            cfg.rejection.log_base = recognizer::LogBase::Natural;
        } else if (base == "base2") {
            cfg.rejection.log_base = recognizer::LogBase::Base2;
        } else {
            throw Error("config: log_base must be 'natural' or 'base2'");
        }
    }
    if (j.contains("detector")) {
        const json& d = j.at("detector");
        cfg.backends.detector = d.value("backend", cfg.backends.detector);
        cfg.backends.heuristic.color_distance =
            d.value("color_distance", cfg.backends.heuristic.color_distance);
        cfg.backends.heuristic.min_area_fraction =
            d.value("min_area_fraction", cfg.backends.heuristic.min_area_fraction);
    }
    if (j.contains("segmenter")) {
        const json& s = j.at("segmenter");
        cfg.backends.segmenter = s.value("backend", cfg.backends.segmenter);
        cfg.backends.chroma.distance = s.value("distance", cfg.backends.chroma.distance);
        if (s.contains("tones")) {
            cfg.backends.chroma.tones.clear();
            for (const auto& tone : s.at("tones")) {
                if (!tone.is_array() || tone.size() != 3) {
                    throw Error("config: each tone must be a 3-element array");
                }
                cfg.backends.chroma.tones.push_back({tone[0].get<std::uint8_t>(),
                                                     tone[1].get<std::uint8_t>(),
                                                     tone[2].get<std::uint8_t>()});
            }
        }
    }
    cfg.validate();
    return cfg;
}

json config_to_json(const ToolkitConfig& cfg) {
    json tones = json::array();
    for (const auto& t : cfg.backends.chroma.tones) {
        tones.push_back(json::array({t[0], t[1], t[2]}));
    }
    return json{
        {"photo",
         {{"small_fraction", cfg.photo.small_fraction},
          {"blur_threshold", cfg.photo.blur_threshold},
          {"hand_threshold", cfg.photo.hand_threshold},
          {"edge_eps", cfg.photo.edge_eps}}},
        {"set",
         {{"sd_max", cfg.set.sd_max},
          {"side_scale", cfg.set.side_scale},
          {"clamp_at_100", cfg.set.clamp_at_100}}},
        {"train",
         {{"iterations", cfg.train.iterations}, {"learning_rate", cfg.train.learning_rate}}},
        {"rejection",
         {{"entropy_threshold", cfg.rejection.entropy_threshold},
          {"confidence_threshold", cfg.rejection.confidence_threshold},
          {"log_base",
           cfg.rejection.log_base == recognizer::LogBase::Natural ? "natural" : "base2"}}},
        {"detector",
         {{"backend", cfg.backends.detector},
          {"color_distance", cfg.backends.heuristic.color_distance},
          {"min_area_fraction", cfg.backends.heuristic.min_area_fraction}}},
        {"segmenter",
         {{"backend", cfg.backends.segmenter},
          {"distance", cfg.backends.chroma.distance},
          {"tones", std::move(tones)}}}};
}

ToolkitConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(path.string() + ": cannot open config file");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(path.string() + ": invalid JSON: " + e.what());
    }
    return config_from_json(j);
}

std::shared_ptr<const detect::DetectorBackend> make_detector(
    const BackendConfig& cfg, std::shared_ptr<const detect::AnnotationStore> store) {
    if (cfg.detector == "oracle") {
        if (!store) throw Error("oracle detector requires annotations");
        return std::make_shared<detect::OracleDetector>(std::move(store));
    }
    return std::make_shared<detect::HeuristicDetector>(cfg.heuristic);
}

std::shared_ptr<const detect::SegmenterBackend> make_segmenter(
    const BackendConfig& cfg, std::shared_ptr<const detect::AnnotationStore> store) {
    if (cfg.segmenter == "oracle") {
        if (!store) throw Error("oracle segmenter requires annotations");
        return std::make_shared<detect::OracleSegmenter>(std::move(store));
    }
    return std::make_shared<detect::ChromaSegmenter>(cfg.chroma);
}

}  // namespace teachset::io
