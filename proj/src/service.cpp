#include "teachset/service.hpp"

#include <fstream>
#include <utility>

#include "teachset/error.hpp"
#include "teachset/image_io.hpp"
#include "teachset/serialize.hpp"
#include "teachset/setdesc.hpp"

namespace teachset::service {

using nlohmann::json;

namespace {

void reply_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
    reply_json(res, status, json{{"error", message}});
}

std::string decode_base64(const std::string& in) {
    static constexpr char pad = '=';
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::string out;
    int buffer = 0;
    int bits = 0;
    for (const char c : in) {
        if (c == '\n' || c == '\r') continue;
        if (c == pad) break;
        const int v = value_of(c);
        if (v < 0) throw Error("invalid base64 image payload");
        buffer = (buffer << 6) | v;
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<char>((buffer >> bits) & 0xff));
        }
    }
    return out;
}

}  // namespace

Service::Service(io::ToolkitConfig cfg, std::filesystem::path state_dir)
    : cfg_(std::move(cfg)), state_dir_(std::move(state_dir)) {
    cfg_.validate();
    if (cfg_.backends.detector == "oracle" || cfg_.backends.segmenter == "oracle") {
        throw Error("service: oracle backends need annotations and are not servable");
    }
    detector_ = io::make_detector(cfg_.backends, nullptr);
    segmenter_ = io::make_segmenter(cfg_.backends, nullptr);
    extractor_ = std::make_shared<recognizer::GridPoolExtractor>();
    if (!state_dir_.empty()) {
        std::filesystem::create_directories(state_dir_);
        load_persisted_model();
    }
    setup_routes();
}

Service::~Service() { stop(); }

void Service::load_persisted_model() {
    const auto path = state_dir_ / "model.json";
    std::ifstream in(path);
    if (!in) return;
    json j;
    in >> j;
    auto model = std::make_shared<recognizer::Model>(serialize::model_from_json(j));
    std::unique_lock lock(model_mutex_);
    model_ = std::move(model);
}

bool Service::training_in_progress() const {
    std::lock_guard lock(jobs_mutex_);
    return job_running_;
}

json Service::describe_upload(const std::string& set_id, const httplib::Request& req) {
    std::string image_bytes;
    std::optional<geometry::CameraPose> pose;

    if (req.is_multipart_form_data()) {
        if (!req.has_file("image")) throw Error("multipart body needs an 'image' part");
        image_bytes = req.get_file_value("image").content;
        if (req.has_file("pose")) {
            pose = serialize::pose_from_json(json::parse(req.get_file_value("pose").content));
        }
    } else {
        // base64 fallback, switched on the JSON content type
        const json body = json::parse(req.body);
        if (!body.contains("image_b64")) throw Error("JSON body needs 'image_b64'");
        image_bytes = decode_base64(body.at("image_b64").get<std::string>());
        if (body.contains("pose") && !body.at("pose").is_null()) {
            pose = serialize::pose_from_json(body.at("pose"));
        }
    }

    imaging::ImageRGB img = io::decode_image(image_bytes);

    std::lock_guard lock(sets_mutex_);
    SetRecord& set = sets_[set_id];
    StoredPhoto photo;
    photo.id = set_id + "/p" + std::to_string(set.photos.size());
    photo.pose = pose;
    photo.descriptors =
        photodesc::describe_photo(img, *detector_, *segmenter_, cfg_.photo, photo.id);
    photo.image = std::move(img);

    json response = serialize::to_json(photo.descriptors);
    response["photo"] = photo.id;
    response["spoken"] = photodesc::spoken_flags(photo.descriptors);
    response["version"] = serialize::kSchemaVersion;
    set.photos.push_back(std::move(photo));
    return response;
}

void Service::setup_routes() {
    server_.Get("/v1/healthz", [](const httplib::Request&, httplib::Response& res) {
        reply_json(res, 200, json{{"status", "ok"}});
    });

    server_.Post("/v1/sets/:set/photos",
                 [this](const httplib::Request& req, httplib::Response& res) {
                     try {
                         const json out = describe_upload(req.path_params.at("set"), req);
                         reply_json(res, 200, out);
                     } catch (const std::exception& e) {
                         reply_error(res, 400, e.what());
                     }
                 });

    server_.Get("/v1/sets/:set/summary",
                [this](const httplib::Request& req, httplib::Response& res) {
                    const std::string set_id = req.path_params.at("set");
                    std::vector<photodesc::PhotoDescriptors> descs;
                    std::vector<geometry::CameraPose> poses;
                    bool all_posed = true;
                    {
                        std::lock_guard lock(sets_mutex_);
                        const auto it = sets_.find(set_id);
                        if (it == sets_.end() || it->second.photos.empty()) {
                            reply_error(res, 404, "unknown set '" + set_id + "'");
                            return;
                        }
                        for (const auto& p : it->second.photos) {
                            descs.push_back(p.descriptors);
                            if (p.pose) {
                                poses.push_back(*p.pose);
                            } else {
                                all_posed = false;
                            }
                        }
                    }
                    try {
                        std::optional<std::vector<geometry::CameraPose>> pose_opt;
                        if (all_posed) pose_opt = std::move(poses);
                        const auto summary = setdesc::set_summary(descs, pose_opt, {}, cfg_.set);
                        json out = serialize::to_json(summary);
                        out["set"] = set_id;
                        out["version"] = serialize::kSchemaVersion;
                        reply_json(res, 200, out);
                    } catch (const std::exception& e) {
                        reply_error(res, 400, e.what());
                    }
                });

    server_.Post("/v1/train", [this](const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::exception& e) {
            reply_error(res, 400, std::string("invalid JSON body: ") + e.what());
            return;
        }
        if (!body.contains("sets") || !body.at("sets").is_array() || body.at("sets").empty()) {
            reply_error(res, 400, "body needs a non-empty 'sets' array");
            return;
        }

        std::vector<std::pair<std::string, std::vector<StoredPhoto>>> batches;
        {
            std::lock_guard lock(sets_mutex_);
            for (const auto& entry : body.at("sets")) {
                const std::string id = entry.at("id").get<std::string>();
                const std::string label = entry.at("label").get<std::string>();
                const auto it = sets_.find(id);
                if (it == sets_.end() || it->second.photos.empty()) {
                    reply_error(res, 404, "unknown set '" + id + "'");
                    return;
                }
                batches.emplace_back(label, it->second.photos);
            }
        }

        std::string job_id;
        {
            std::lock_guard lock(jobs_mutex_);
            if (job_running_) {
                reply_error(res, 409, "a training job is already running");
                return;
            }
            job_running_ = true;
            job_id = "job-" + std::to_string(next_job_++);
            jobs_[job_id] = Job{job_id, "pending", ""};
        }
        if (trainer_.joinable()) trainer_.join();
        trainer_ = std::thread(&Service::run_training, this, job_id, std::move(batches));
        reply_json(res, 202, json{{"job_id", job_id}});
    });

    server_.Get("/v1/jobs/:id", [this](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.path_params.at("id");
        std::lock_guard lock(jobs_mutex_);
        const auto it = jobs_.find(id);
        if (it == jobs_.end()) {
            reply_error(res, 404, "unknown job '" + id + "'");
            return;
        }
        json out{{"id", it->second.id}, {"state", it->second.state}};
        if (!it->second.error.empty()) out["error"] = it->second.error;
        if (it->second.state == "done") out["model"] = "model.json";
        reply_json(res, 200, out);
    });

    server_.Post("/v1/recognize", [this](const httplib::Request& req, httplib::Response& res) {
        {
            std::lock_guard lock(jobs_mutex_);
            if (job_running_) {
                // Scan is inactive while training is in progress.
                reply_error(res, 409, "training in progress");
                return;
            }
        }
        std::shared_ptr<const recognizer::Model> model;
        {
            std::shared_lock lock(model_mutex_);
            model = model_;
        }
        if (!model) {
            reply_error(res, 404, "no model trained");
            return;
        }
        try {
            std::string image_bytes;
            if (req.is_multipart_form_data()) {
                if (!req.has_file("image")) throw Error("multipart body needs an 'image' part");
                image_bytes = req.get_file_value("image").content;
            } else {
                const json body = json::parse(req.body);
                if (!body.contains("image_b64")) throw Error("JSON body needs 'image_b64'");
                image_bytes = decode_base64(body.at("image_b64").get<std::string>());
            }
            const imaging::ImageRGB img = io::decode_image(image_bytes);
            const recognizer::Prediction p =
                recognizer::predict_image(*model, img, cfg_.rejection, "upload");
            json confidences = json::object();
            for (std::size_t i = 0; i < model->labels.size(); ++i) {
                confidences[model->labels[i]] = p.confidences[i];
            }
            reply_json(res, 200,
                       json{{"outcome", p.label ? json(*p.label) : json("dont_know")},
                            {"confidences", std::move(confidences)},
                            {"entropy", p.entropy},
                            {"version", serialize::kSchemaVersion}});
        } catch (const std::exception& e) {
            reply_error(res, 400, e.what());
        }
    });
}

void Service::run_training(std::string job_id,
                           std::vector<std::pair<std::string, std::vector<StoredPhoto>>> batches) {
    auto set_state = [&](const std::string& state, const std::string& error = "") {
        std::lock_guard lock(jobs_mutex_);
        jobs_[job_id].state = state;
        jobs_[job_id].error = error;
        if (state == "done" || state == "failed") job_running_ = false;
    };
    set_state("running");
    try {
        std::vector<recognizer::TrainSample> samples;
        for (const auto& [label, photos] : batches) {
            for (const auto& photo : photos) {
                samples.push_back({extractor_->extract(photo.image, photo.id), label});
            }
        }
        recognizer::TrainResult result =
            recognizer::train(samples, cfg_.train, extractor_->info());
        auto model = std::make_shared<recognizer::Model>(std::move(result.model));
        model->extractor_impl = extractor_;
        if (!state_dir_.empty()) {
            std::ofstream out(state_dir_ / "model.json");
            out << serialize::to_json(*model).dump(2) << "\n";
        }
        {
            std::unique_lock lock(model_mutex_);
            model_ = std::move(model);
        }
        set_state("done");
    } catch (const std::exception& e) {
        set_state("failed", e.what());
    }
}

int Service::start(const std::string& host) {
    const int port = server_.bind_to_any_port(host);
    if (port <= 0) throw Error("service: failed to bind to " + host);
    server_thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return port;
}

bool Service::listen(const std::string& host, int port) {
    return server_.listen(host, port);
}

void Service::stop() {
    server_.stop();
    if (server_thread_.joinable()) server_thread_.join();
    if (trainer_.joinable()) trainer_.join();
}

}  // namespace teachset::service
