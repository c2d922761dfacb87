#include "teachset/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include <json.hpp>

#include "teachset/config.hpp"
#include "teachset/error.hpp"
#include "teachset/image_io.hpp"
#include "teachset/manifest.hpp"
#include "teachset/serialize.hpp"
#include "teachset/session.hpp"

namespace teachset::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int fail(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return 1;
}

io::ToolkitConfig resolve_config(const std::optional<fs::path>& config_path) {
    if (config_path) return io::load_config(*config_path);
    return io::ToolkitConfig{};
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw Error(path.string() + ": write failed");
}

struct DescribedSet {
    std::vector<std::string> photo_ids;
    std::vector<photodesc::PhotoDescriptors> descriptors;
    setdesc::SetDescriptors summary;
};

DescribedSet describe_manifest(const io::SetManifest& manifest, const io::ToolkitConfig& cfg) {
    auto store = io::annotation_store_from_manifests({manifest});
    const auto detector = io::make_detector(cfg.backends, store);
    const auto segmenter = io::make_segmenter(cfg.backends, store);

    DescribedSet out;
    bool all_posed = !manifest.photos.empty();
    std::vector<geometry::CameraPose> poses;
    std::vector<geometry::Side> sides;
    for (const auto& photo : manifest.photos) {
        const imaging::ImageRGB img = io::load_image(photo.resolved_path);
        out.photo_ids.push_back(photo.path);
        out.descriptors.push_back(
            photodesc::describe_photo(img, *detector, *segmenter, cfg.photo, photo.path));
        if (photo.pose) {
            poses.push_back(*photo.pose);
            if (manifest.object_frame) {
                sides.push_back(geometry::classify_side(*photo.pose, *manifest.object_frame));
            }
        } else {
            all_posed = false;
        }
    }
    std::optional<std::vector<geometry::CameraPose>> pose_opt;
    if (all_posed) pose_opt = std::move(poses);
    out.summary = setdesc::set_summary(out.descriptors, pose_opt, sides, cfg.set);
    return out;
}

std::vector<recognizer::TrainSample> samples_from_manifests(
    const std::vector<io::SetManifest>& manifests, const recognizer::FeatureExtractor& extractor) {
    std::vector<recognizer::TrainSample> samples;
    for (const auto& m : manifests) {
        for (const auto& photo : m.photos) {
            const imaging::ImageRGB img = io::load_image(photo.resolved_path);
            samples.push_back({extractor.extract(img, photo.path), m.label});
        }
    }
    return samples;
}

std::vector<recognizer::TestItem> test_items_from_manifests(
    const std::vector<io::SetManifest>& manifests) {
    std::vector<recognizer::TestItem> items;
    for (const auto& m : manifests) {
        for (const auto& photo : m.photos) {
            items.push_back({io::load_image(photo.resolved_path), m.label, photo.path});
        }
    }
    return items;
}

recognizer::Model load_model_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("no model at " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(path.string() + ": invalid model JSON: " + e.what());
    }
    return serialize::model_from_json(j);
}

std::string outcome_text(const std::optional<std::string>& label) {
    return label ? *label : "dont_know";
}

}  // namespace

int cmd_describe(const fs::path& manifest_path, const std::optional<fs::path>& config_path,
                 const fs::path& out_dir) {
    try {
        const io::ToolkitConfig cfg = resolve_config(config_path);
        const io::SetManifest manifest = io::load_manifest(manifest_path);
        if (manifest.photos.empty()) return fail(manifest_path.string() + ": empty photo list");
        const DescribedSet described = describe_manifest(manifest, cfg);

        fs::create_directories(out_dir);
        json records = json::array();
        for (std::size_t i = 0; i < described.descriptors.size(); ++i) {
            json rec = serialize::to_json(described.descriptors[i]);
            rec["photo"] = described.photo_ids[i];
            rec["spoken"] = photodesc::spoken_flags(described.descriptors[i]);
            records.push_back(std::move(rec));
        }
        const json descriptors_doc{{"version", serialize::kSchemaVersion},
                                   {"label", manifest.label},
                                   {"descriptors", std::move(records)}};
        write_text(out_dir / "descriptors.json", descriptors_doc.dump(2) + "\n");

        json summary_doc = serialize::to_json(described.summary);
        summary_doc["version"] = serialize::kSchemaVersion;
        summary_doc["label"] = manifest.label;
        write_text(out_dir / "summary.json", summary_doc.dump(2) + "\n");

        std::cout << "described " << described.descriptors.size() << " photos -> "
                  << (out_dir / "descriptors.json").string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

int cmd_correlate(const std::vector<std::pair<fs::path, fs::path>>& pairs,
                  const fs::path& out_dir) {
    try {
        if (pairs.size() < 2) return fail("correlate needs at least two (summary, annotation) pairs");
        std::vector<std::pair<setdesc::SetDescriptors, metrics::SetAnnotationSummary>> data;
        for (const auto& [est_path, ann_path] : pairs) {
            std::ifstream est_in(est_path);
            if (!est_in) return fail(est_path.string() + ": cannot open");
            json est_json;
            est_in >> est_json;
            const setdesc::SetDescriptors est = serialize::set_descriptors_from_json(est_json);

            std::ifstream ann_in(ann_path);
            if (!ann_in) return fail(ann_path.string() + ": cannot open");
            json ann_json;
            ann_in >> ann_json;
            metrics::SetAnnotationSummary ann;
            if (ann_json.is_array()) {
                std::vector<metrics::PhotoAnnotation> photos;
                for (const auto& aj : ann_json) {
                    photos.push_back(serialize::annotation_from_json(aj));
                }
                ann = metrics::summarize_annotations(photos);
            } else {
                ann = serialize::annotation_summary_from_json(ann_json);
            }
            data.emplace_back(est, ann);
        }

        const auto rows = metrics::correlate_descriptors(data);
        fs::create_directories(out_dir);
        std::string csv = "descriptor,r,n,defined\n";
        for (const auto& row : rows) {
            csv += row.descriptor + ",";
            csv += row.correlation.defined ? fmt_double(row.correlation.r) : "";
            csv += "," + std::to_string(row.correlation.n) + ",";
            csv += row.correlation.defined ? "true" : "false";
            csv += "\n";
        }
        write_text(out_dir / "report.csv", csv);

        // Scatter points for external plotting, one file per descriptor.
        auto scatter = [&](const std::string& name, auto est_get, auto ann_get) {
            std::string s = "annotated,estimated\n";
            for (const auto& [est, ann] : data) {
                const auto e = est_get(est);
                if (!e) continue;
                s += fmt_double(ann_get(ann)) + "," + fmt_double(*e) + "\n";
            }
            write_text(out_dir / ("scatter_" + name + ".csv"), s);
        };
        using SD = setdesc::SetDescriptors;
        using AS = metrics::SetAnnotationSummary;
        scatter(
            "variation_in_size", [](const SD& s) { return s.var_size_pct; },
            [](const AS& a) { return a.size_variation; });
        scatter(
            "variation_in_perspective",
            [](const SD& s) { return std::optional<double>(s.var_perspective_pct); },
            [](const AS& a) { return a.perspective_diversity; });
        scatter(
            "variation_in_background", [](const SD& s) { return s.var_background_pct; },
            [](const AS& a) { return a.background_diversity; });
        scatter(
            "cropped_object",
            [](const SD& s) { return std::optional<double>(s.flag_percentages.cropped); },
            [](const AS& a) { return static_cast<double>(a.cropped_count); });
        scatter(
            "hand_in_photo",
            [](const SD& s) { return std::optional<double>(s.flag_percentages.hand); },
            [](const AS& a) { return static_cast<double>(a.hand_count); });
        scatter(
            "blurry_photo",
            [](const SD& s) { return std::optional<double>(s.flag_percentages.blurry); },
            [](const AS& a) { return static_cast<double>(a.blurry_count); });
        scatter(
            "small_object",
            [](const SD& s) { return std::optional<double>(s.flag_percentages.small); },
            [](const AS& a) { return static_cast<double>(a.small_count); });

        for (const auto& row : rows) {
            std::cout << row.descriptor << ": "
                      << (row.correlation.defined ? "r=" + fmt_double(row.correlation.r)
                                                  : "undefined")
                      << " (n=" << row.correlation.n << ")\n";
        }
        return 0;
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

int cmd_train(const std::vector<fs::path>& manifest_paths,
              const std::optional<fs::path>& config_path, const fs::path& model_out) {
    try {
        const io::ToolkitConfig cfg = resolve_config(config_path);
        if (manifest_paths.size() < 2) return fail("train needs at least two labeled manifests");
        std::vector<io::SetManifest> manifests;
        for (const auto& p : manifest_paths) manifests.push_back(io::load_manifest(p));

        const recognizer::GridPoolExtractor extractor;
        const auto samples = samples_from_manifests(manifests, extractor);
        const recognizer::TrainResult result =
            recognizer::train(samples, cfg.train, extractor.info());
        write_text(model_out, serialize::to_json(result.model).dump(2) + "\n");
        std::cout << "trained " << result.model.labels.size() << " classes on "
                  << samples.size() << " photos; final loss "
                  << fmt_double(result.loss_history.back()) << " -> " << model_out.string()
                  << "\n";
        return 0;
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

int cmd_recognize(const fs::path& model_path, const fs::path& image_path,
                  const std::optional<fs::path>& config_path) {
    try {
        const io::ToolkitConfig cfg = resolve_config(config_path);
        const recognizer::Model model = load_model_file(model_path);
        const imaging::ImageRGB img = io::load_image(image_path);
        const recognizer::Prediction p =
            recognizer::predict_image(model, img, cfg.rejection, image_path.string());
        std::cout << "outcome: " << outcome_text(p.label) << "\n";
        std::cout << "entropy: " << fmt_double(p.entropy) << "\n";
        std::cout << "confidences:";
        for (std::size_t i = 0; i < model.labels.size(); ++i) {
            std::cout << " " << model.labels[i] << "=" << fmt_double(p.confidences[i]);
        }
        std::cout << "\n";
        return 0;
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

int cmd_evaluate(const fs::path& model_path, const std::vector<fs::path>& manifest_paths,
                 const std::optional<fs::path>& config_path,
                 const std::optional<fs::path>& outcomes_csv) {
    try {
        const io::ToolkitConfig cfg = resolve_config(config_path);
        const recognizer::Model model = load_model_file(model_path);
        if (manifest_paths.empty()) return fail("evaluate needs at least one test manifest");
        std::vector<io::SetManifest> manifests;
        for (const auto& p : manifest_paths) manifests.push_back(io::load_manifest(p));
        const auto items = test_items_from_manifests(manifests);
        const recognizer::Evaluation ev = recognizer::evaluate(model, items, cfg.rejection);

        std::cout << "accuracy: " << fmt_double(ev.accuracy) << "\n";
        if (outcomes_csv) {
            std::string csv = "photo,truth,outcome,correct\n";
            for (const auto& o : ev.outcomes) {
                csv += o.photo_id + "," + o.truth + "," + outcome_text(o.outcome) + "," +
                       (o.correct ? "true" : "false") + "\n";
            }
            write_text(*outcomes_csv, csv);
        }
        return 0;
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

int cmd_crosseval(const std::vector<fs::path>& model_paths,
                  const std::vector<fs::path>& manifest_paths, bool pooled,
                  const std::optional<fs::path>& config_path,
                  const std::optional<fs::path>& matrix_csv) {
    try {
        const io::ToolkitConfig cfg = resolve_config(config_path);
        if (model_paths.empty()) return fail("crosseval needs at least one model");
        if (manifest_paths.empty()) return fail("crosseval needs at least one test manifest");

        std::vector<recognizer::Model> models;
        std::vector<std::string> model_names;
        for (const auto& p : model_paths) {
            models.push_back(load_model_file(p));
            model_names.push_back(p.stem().string());
        }
        std::vector<recognizer::NamedTestSet> sets;
        for (const auto& p : manifest_paths) {
            const io::SetManifest m = io::load_manifest(p);
            sets.push_back({p.stem().string(), test_items_from_manifests({m})});
        }
        if (pooled) {
            recognizer::NamedTestSet all;
            all.name = "pooled";
            for (const auto& s : sets) {
                all.items.insert(all.items.end(), s.items.begin(), s.items.end());
            }
            sets.push_back(std::move(all));
        }

        const auto matrix = recognizer::cross_evaluate(models, model_names, sets, cfg.rejection);
        std::string csv = "model";
        for (const auto& name : matrix.set_names) csv += "," + name;
        csv += "\n";
        for (std::size_t r = 0; r < matrix.model_names.size(); ++r) {
            csv += matrix.model_names[r];
            for (std::size_t c = 0; c < matrix.set_names.size(); ++c) {
                csv += "," + fmt_double(matrix.at(r, c));
            }
            csv += "\n";
        }
        std::cout << csv;
        if (matrix_csv) write_text(*matrix_csv, csv);
        return 0;
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

int cmd_simulate(const std::optional<fs::path>& scenario_path,
                 std::optional<std::uint64_t> seed_override, const fs::path& out_dir,
                 const std::optional<fs::path>& config_path, bool save_photos) {
    try {
        const io::ToolkitConfig cfg = resolve_config(config_path);
        session::TeachingPolicy policy = session::demo_policy();
        std::vector<scene::SceneSpec> scenes = session::demo_scenes();
        std::uint64_t seed = 0;
        if (scenario_path) {
            std::ifstream in(*scenario_path);
            if (!in) return fail(scenario_path->string() + ": cannot open scenario");
            json j;
            in >> j;
            if (j.contains("policy")) policy = serialize::teaching_policy_from_json(j.at("policy"));
            if (j.contains("scenes")) {
                scenes.clear();
                for (const auto& sj : j.at("scenes")) {
                    scenes.push_back(serialize::scene_spec_from_json(sj));
                }
            }
            seed = j.value("seed", seed);
        }
        if (seed_override) seed = *seed_override;
        policy.objects = static_cast<int>(scenes.size());

        session::SessionConfig scfg;
        scfg.photo = cfg.photo;
        scfg.set = cfg.set;
        scfg.train = cfg.train;
        scfg.rejection = cfg.rejection;
        // Without an explicit config the simulator describes with oracle
        // backends, so logged flags equal the rendered ground truth.
        scfg.use_oracle_backends =
            config_path ? cfg.backends.detector == "oracle" : true;

        const session::SessionLog log = session::run_session(policy, scenes, scfg, seed);

        fs::create_directories(out_dir);
        write_text(out_dir / "log.json", serialize::session_log_to_json(log).dump(2) + "\n");

        std::string csv =
            "object_id,label,attempt,decision,photo_count,var_size_pct,var_perspective_pct,"
            "var_background_pct,small_pct,cropped_pct,blurry_pct,hand_pct,object_missing_pct\n";
        for (const auto& obj : log.objects) {
            for (std::size_t a = 0; a < obj.attempts.size(); ++a) {
                const auto& att = obj.attempts[a];
                const auto& s = att.summary;
                csv += obj.object_id + "," + obj.label + "," + std::to_string(a) + "," +
                       att.decision + "," + std::to_string(s.photo_count) + ",";
                csv += (s.var_size_pct ? fmt_double(*s.var_size_pct) : "unavailable");
                csv += "," + fmt_double(s.var_perspective_pct) + ",";
                csv += (s.var_background_pct ? fmt_double(*s.var_background_pct) : "unavailable");
                csv += "," + fmt_double(s.flag_percentages.small) + "," +
                       fmt_double(s.flag_percentages.cropped) + "," +
                       fmt_double(s.flag_percentages.blurry) + "," +
                       fmt_double(s.flag_percentages.hand) + "," +
                       fmt_double(s.flag_percentages.object_missing) + "\n";
            }
        }
        write_text(out_dir / "summary.csv", csv);

        std::string timings = "name,seconds\n";
        for (const auto& t : log.timings) {
            timings += t.name + "," + fmt_double(t.seconds) + "\n";
        }
        write_text(out_dir / "timings.csv", timings);

        if (save_photos) {
            fs::create_directories(out_dir / "photos");
            fs::create_directories(out_dir / "tests");
            for (const auto& obj : log.objects) {
                for (const auto& att : obj.attempts) {
                    for (const auto& photo : att.photos) {
                        io::save_png(out_dir / photo.id, photo.image);
                    }
                }
            }
            for (const auto& t : log.test_photos) {
                io::save_png(out_dir / t.id, t.image);
            }
        }

        std::cout << "session complete: accuracy " << fmt_double(log.evaluation.accuracy)
                  << ", log at " << (out_dir / "log.json").string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

}  // namespace teachset::cli
