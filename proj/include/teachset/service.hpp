#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "teachset/config.hpp"
#include "teachset/photodesc.hpp"
#include "teachset/recognizer.hpp"

namespace teachset::service {

/// HTTP facade over the descriptor and recognition pipelines, mirroring the
/// phone/server split: photos are uploaded per set, training runs as an
/// asynchronous job (one at a time), and recognition is refused with 409 while
/// a job is in flight. The current model persists as model.json under the
/// state directory, so a restarted instance answers recognize requests
/// identically.
///
/// Endpoints (v1):
///   POST /v1/sets/{set}/photos   multipart image (+ optional pose JSON), or
///                                {"image_b64": ..., "pose": ...} JSON body
///   GET  /v1/sets/{set}/summary
///   POST /v1/train               {"sets": [{"id": ..., "label": ...}, ...]}
///   GET  /v1/jobs/{id}
///   POST /v1/recognize           multipart image or base64 JSON body
///   GET  /v1/healthz
class Service {
public:
    Service(io::ToolkitConfig cfg, std::filesystem::path state_dir);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds to an ephemeral port and serves from a background thread.
    /// Returns the bound port. Used by tests and by serve --port 0.
    int start(const std::string& host);

    /// Serves on a fixed port, blocking. Returns false if binding fails.
    bool listen(const std::string& host, int port);

    void stop();

    bool training_in_progress() const;

private:
    struct StoredPhoto {
        std::string id;
        imaging::ImageRGB image;
        std::optional<geometry::CameraPose> pose;
        photodesc::PhotoDescriptors descriptors;
    };
    struct SetRecord {
        std::vector<StoredPhoto> photos;
    };
    struct Job {
        std::string id;
        std::string state;  // "pending" | "running" | "done" | "failed"
        std::string error;
    };

    void setup_routes();
    void load_persisted_model();
    void run_training(std::string job_id,
                      std::vector<std::pair<std::string, std::vector<StoredPhoto>>> batches);
    nlohmann::json describe_upload(const std::string& set_id, const httplib::Request& req);

    io::ToolkitConfig cfg_;
    std::filesystem::path state_dir_;
    std::shared_ptr<const detect::DetectorBackend> detector_;
    std::shared_ptr<const detect::SegmenterBackend> segmenter_;
    std::shared_ptr<const recognizer::FeatureExtractor> extractor_;

    mutable std::mutex sets_mutex_;
    std::map<std::string, SetRecord> sets_;

    mutable std::mutex jobs_mutex_;
    std::map<std::string, Job> jobs_;
    bool job_running_ = false;
    int next_job_ = 1;
    std::thread trainer_;

    mutable std::shared_mutex model_mutex_;
    std::shared_ptr<const recognizer::Model> model_;

    httplib::Server server_;
    std::thread server_thread_;
};

}  // namespace teachset::service
