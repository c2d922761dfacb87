#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "teachset/photodesc.hpp"
#include "teachset/recognizer.hpp"
#include "teachset/scene.hpp"
#include "teachset/setdesc.hpp"

namespace teachset::session {

// ---------------------------------------------------------------------------
// Teaching-flow state machine
// ---------------------------------------------------------------------------

struct Idle {};
struct Capturing {
    std::string object_id;
    int count = 0;
};
struct Summarizing {
    std::string object_id;
};
struct Naming {
    std::string object_id;
};
struct Training {};
struct Ready {};

using SessionState = std::variant<Idle, Capturing, Summarizing, Naming, Training, Ready>;

std::string state_name(const SessionState& s);

struct EvTeach {
    std::string object_id;
};
struct EvCapture {};
struct EvOk {};
struct EvRetrain {};
struct EvName {
    std::string label;
};
struct EvTrainingDone {};
struct EvRecognize {};

using Event = std::variant<EvTeach, EvCapture, EvOk, EvRetrain, EvName, EvTrainingDone,
                           EvRecognize>;

std::string event_name(const Event& e);

/// Result of applying an event: either the next state, or a rejection with the
/// state unchanged and a diagnostic. Rejection is an ordinary outcome, not an
/// error.
struct StepResult {
    bool accepted = false;
    SessionState state;
    std::string diagnostic;
};

/// Deterministic transition function. Capture increments the photo count and
/// moves to Summarizing at photos_per_object; Retrain returns to an empty
/// Capturing state; recognize requests are only honored in Idle or Ready with
/// a trained model, and never during Training.
StepResult step(const SessionState& state, const Event& event, int photos_per_object,
                bool model_available);

/// Convenience wrapper that owns the state and the model-availability flag.
class Machine {
public:
    explicit Machine(int photos_per_object);

    StepResult apply(const Event& event);
    const SessionState& state() const { return state_; }
    bool model_available() const { return model_available_; }

private:
    SessionState state_ = Idle{};
    int photos_per_object_;
    bool model_available_ = false;
};

// ---------------------------------------------------------------------------
// Scripted teaching policies
// ---------------------------------------------------------------------------

/// Review-time rule deciding whether a set should be discarded and recaptured.
/// Any violated bound triggers a retrain.
struct RetrainRule {
    std::optional<double> max_cropped_pct;
    std::optional<double> max_blurry_pct;
    std::optional<double> max_hand_pct;
    std::optional<double> min_var_size_pct;
    std::optional<double> min_var_perspective_pct;
    std::optional<double> min_var_background_pct;

    bool triggers(const setdesc::SetDescriptors& summary) const;
};

/// Scripted photo-taking behavior standing in for a human teacher.
struct TeachingPolicy {
    double position_jitter_m = 0.02;
    double orientation_jitter_rad = 0.03;
    double crop_probability = 0.0;
    double hand_probability = 0.0;
    double blur_probability = 0.0;
    std::vector<geometry::Side> sides_to_visit = {geometry::Side::PosZ};
    int photos_per_object = 30;
    int objects = 3;
    int test_photos_per_object = 15;
    double camera_distance_m = 0.45;
    RetrainRule retrain_rule;
    int max_retrains = 1;
    double retrain_noise_scale = 0.5;  // crop/hand/blur odds shrink on each retrain

    void validate() const;
};

// ---------------------------------------------------------------------------
// Session log
// ---------------------------------------------------------------------------

struct PhotoRecord {
    std::string id;  // also the file name when the log is saved
    geometry::CameraPose pose;
    metrics::PhotoAnnotation annotation;
    photodesc::PhotoDescriptors descriptors;
    std::vector<std::string> spoken;
    imaging::ImageRGB image;
};

struct AttemptLog {
    std::vector<PhotoRecord> photos;
    setdesc::SetDescriptors summary;
    std::string decision;  // "ok" or "retrain"
};

struct ObjectLog {
    std::string object_id;
    std::string label;
    std::vector<AttemptLog> attempts;  // last attempt is the kept set
};

struct TestPhotoRecord {
    std::string id;
    std::string truth;
    metrics::PhotoAnnotation annotation;
    imaging::ImageRGB image;
};

struct Timing {
    std::string name;
    double seconds = 0.0;
};

/// Full replayable trace of one simulated teaching session. Timings are wall
/// clock and live outside the deterministic manifest.
struct SessionLog {
    std::uint64_t seed = 0;
    std::vector<ObjectLog> objects;
    recognizer::Model model;
    std::vector<TestPhotoRecord> test_photos;
    recognizer::Evaluation evaluation;
    std::vector<Timing> timings;
};

struct SessionConfig {
    photodesc::PhotoDescConfig photo;
    setdesc::SetDescConfig set;
    recognizer::TrainConfig train;
    recognizer::RejectionConfig rejection;
    bool use_oracle_backends = true;  // otherwise heuristic detector + chroma segmenter
};

/// Runs the full teach -> summarize -> (OK | Retrain) -> train -> test flow
/// against the given scenes. Identical seeds yield identical logs.
SessionLog run_session(const TeachingPolicy& policy, const std::vector<scene::SceneSpec>& specs,
                       const SessionConfig& cfg, std::uint64_t seed);

/// Built-in three-object scenario with distinct palettes, used by the simulate
/// command when no scenario file is given.
std::vector<scene::SceneSpec> demo_scenes();
TeachingPolicy demo_policy();

}  // namespace teachset::session
