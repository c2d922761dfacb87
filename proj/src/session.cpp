#include "teachset/session.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <utility>

#include "teachset/detect.hpp"
#include "teachset/error.hpp"
#include "teachset/rng.hpp"

namespace teachset::session {

using geometry::CameraPose;
using geometry::Side;
using geometry::Vec3;

// ---------------------------------------------------------------------------
// State machine
// ---------------------------------------------------------------------------

std::string state_name(const SessionState& s) {
    struct Visitor {
        std::string operator()(const Idle&) const { return "Idle"; }
        std::string operator()(const Capturing& c) const {
            return "Capturing(" + c.object_id + ", " + std::to_string(c.count) + ")";
        }
        std::string operator()(const Summarizing& c) const {
            return "Summarizing(" + c.object_id + ")";
        }
        std::string operator()(const Naming& c) const { return "Naming(" + c.object_id + ")"; }
        std::string operator()(const Training&) const { return "Training"; }
        std::string operator()(const Ready&) const { return "Ready"; }
    };
    return std::visit(Visitor{}, s);
}

std::string event_name(const Event& e) {
    struct Visitor {
        std::string operator()(const EvTeach&) const { return "teach"; }
        std::string operator()(const EvCapture&) const { return "capture"; }
        std::string operator()(const EvOk&) const { return "ok"; }
        std::string operator()(const EvRetrain&) const { return "retrain"; }
        std::string operator()(const EvName&) const { return "name"; }
        std::string operator()(const EvTrainingDone&) const { return "training-done"; }
        std::string operator()(const EvRecognize&) const { return "recognize"; }
    };
    return std::visit(Visitor{}, e);
}

StepResult step(const SessionState& state, const Event& event, int photos_per_object,
                bool model_available) {
    if (photos_per_object < 1) throw Error("step: photos_per_object must be >= 1");

    auto reject = [&](const std::string& why) {
        return StepResult{false, state, "rejected '" + event_name(event) + "' in state " +
                                            state_name(state) + ": " + why};
    };
    auto accept = [&](SessionState next) {
        return StepResult{true, std::move(next), ""};
    };

    if (const auto* teach = std::get_if<EvTeach>(&event)) {
        if (std::holds_alternative<Idle>(state) || std::holds_alternative<Ready>(state)) {
            return accept(Capturing{teach->object_id, 0});
        }
        return reject("teaching can only start from Idle or Ready");
    }
    if (std::holds_alternative<EvCapture>(event)) {
        if (const auto* cap = std::get_if<Capturing>(&state)) {
            const int next = cap->count + 1;
            if (next >= photos_per_object) return accept(Summarizing{cap->object_id});
            return accept(Capturing{cap->object_id, next});
        }
        return reject("capture is only available while capturing");
    }
    if (std::holds_alternative<EvOk>(event)) {
        if (const auto* sum = std::get_if<Summarizing>(&state)) {
            return accept(Naming{sum->object_id});
        }
        return reject("OK is only available on the summary screen");
    }
    if (std::holds_alternative<EvRetrain>(event)) {
        if (const auto* sum = std::get_if<Summarizing>(&state)) {
            // The whole set is discarded; capture restarts from zero.
            return accept(Capturing{sum->object_id, 0});
        }
        return reject("Retrain is only available on the summary screen");
    }
    if (std::holds_alternative<EvName>(event)) {
        if (std::holds_alternative<Naming>(state)) return accept(Training{});
        return reject("naming is only available after the summary is accepted");
    }
    if (std::holds_alternative<EvTrainingDone>(event)) {
        if (std::holds_alternative<Training>(state)) return accept(Ready{});
        return reject("no training job is running");
    }
    if (std::holds_alternative<EvRecognize>(event)) {
        if (std::holds_alternative<Training>(state)) {
            return reject("recognition is inactive while training is in progress");
        }
        if (!(std::holds_alternative<Idle>(state) || std::holds_alternative<Ready>(state))) {
            return reject("recognition is only available outside a teaching flow");
        }
        if (!model_available) return reject("no trained model");
        return accept(state);  // query event, state unchanged
    }
    return reject("unknown event");
}

Machine::Machine(int photos_per_object) : photos_per_object_(photos_per_object) {
    if (photos_per_object < 1) throw Error("Machine: photos_per_object must be >= 1");
}

StepResult Machine::apply(const Event& event) {
    StepResult r = step(state_, event, photos_per_object_, model_available_);
    if (r.accepted) {
        state_ = r.state;
        if (std::holds_alternative<EvTrainingDone>(event)) model_available_ = true;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Policies
// ---------------------------------------------------------------------------

bool RetrainRule::triggers(const setdesc::SetDescriptors& summary) const {
    const auto& flags = summary.flag_percentages;
    if (max_cropped_pct && flags.cropped > *max_cropped_pct) return true;
    if (max_blurry_pct && flags.blurry > *max_blurry_pct) return true;
    if (max_hand_pct && flags.hand > *max_hand_pct) return true;
    if (min_var_size_pct && summary.var_size_pct && *summary.var_size_pct < *min_var_size_pct) {
        return true;
    }
    if (min_var_perspective_pct && summary.var_perspective_pct < *min_var_perspective_pct) {
        return true;
    }
    if (min_var_background_pct && summary.var_background_pct &&
        *summary.var_background_pct < *min_var_background_pct) {
        return true;
    }
    return false;
}

void TeachingPolicy::validate() const {
    auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!probability(crop_probability) || !probability(hand_probability) ||
        !probability(blur_probability)) {
        throw Error("TeachingPolicy: probabilities must be in [0, 1]");
    }
    if (photos_per_object < 1) throw Error("TeachingPolicy: photos_per_object must be >= 1");
    if (test_photos_per_object < 1) {
        throw Error("TeachingPolicy: test_photos_per_object must be >= 1");
    }
    if (objects < 1) throw Error("TeachingPolicy: objects must be >= 1");
    if (sides_to_visit.empty()) throw Error("TeachingPolicy: sides_to_visit must not be empty");
    if (max_retrains < 0) throw Error("TeachingPolicy: max_retrains must be >= 0");
    if (!(camera_distance_m > 0)) throw Error("TeachingPolicy: camera distance must be > 0");
    if (position_jitter_m < 0 || orientation_jitter_rad < 0 || retrain_noise_scale < 0) {
        throw Error("TeachingPolicy: jitters and noise scale must be >= 0");
    }
}

// ---------------------------------------------------------------------------
// Session runner
// ---------------------------------------------------------------------------

namespace {

constexpr int kFallbackBlurRadius = 16;

struct NoiseProfile {
    double crop = 0.0;
    double hand = 0.0;
    double blur = 0.0;
};

Vec3 side_direction(const scene::SceneSpec& spec, Side side) {
    const auto& axes = spec.frame.axes;
    switch (side) {
        case Side::PosX: return axes[0];
        case Side::NegX: return axes[0] * -1.0;
        case Side::PosY: return axes[1];
        case Side::NegY: return axes[1] * -1.0;
        case Side::PosZ: return axes[2];
        case Side::NegZ: return axes[2] * -1.0;
    }
    throw Error("side_direction: bad side");
}

struct ShotPlan {
    CameraPose pose;
    scene::SceneSpec spec;  // per-photo variant: hand patch / blur toggled
};

ShotPlan plan_shot(const scene::SceneSpec& base, const TeachingPolicy& policy,
                   const NoiseProfile& noise, Side side, Rng& rng) {
    const Vec3 center = base.frame.center;
    const Vec3 out_dir = side_direction(base, side);
    Vec3 position = center + out_dir * policy.camera_distance_m;
    position += Vec3{rng.normal(), rng.normal(), rng.normal()} * policy.position_jitter_m;

    // Aim at the center with a small angular wobble.
    const Vec3 to_center = (center - position).normalized();
    const scene::CameraBasis basis = scene::camera_basis(to_center);
    const double distance = (center - position).norm();
    Vec3 aim = center + (basis.right * rng.normal() + basis.down * rng.normal()) *
                            (policy.orientation_jitter_rad * distance);

    ShotPlan plan;
    plan.spec = base;
    plan.spec.hand_patch.reset();
    plan.spec.blur_radius.reset();

    if (rng.bernoulli(noise.crop)) {
        // Push the aim sideways by half the frame at object distance, so the
        // projected object straddles the frame edge.
        const bool horizontal = rng.bernoulli(0.5);
        const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
        const double half_frame_world =
            horizontal ? distance * base.camera.width / (2.0 * base.camera.focal_px)
                       : distance * base.camera.height / (2.0 * base.camera.focal_px);
        aim += (horizontal ? basis.right : basis.down) * (sign * half_frame_world);
    }
    if (rng.bernoulli(noise.hand)) {
        plan.spec.hand_patch = base.hand_patch ? *base.hand_patch : scene::HandPatch{};
    }
    if (rng.bernoulli(noise.blur)) {
        plan.spec.blur_radius = base.blur_radius ? *base.blur_radius : kFallbackBlurRadius;
    }

    plan.pose.position = position;
    plan.pose.view_dir = (aim - position).normalized();
    return plan;
}

PhotoRecord take_photo(const ShotPlan& plan, const std::string& id, const SessionConfig& cfg) {
    PhotoRecord rec;
    rec.id = id;
    rec.pose = plan.pose;
    scene::Rendered rendered = scene::render_scene(plan.spec, plan.pose);
    rec.annotation = std::move(rendered.annotation);
    rec.image = std::move(rendered.image);

    if (cfg.use_oracle_backends) {
        auto store = std::make_shared<detect::AnnotationStore>();
        store->put(id, rec.annotation);
        const detect::OracleDetector detector(store);
        const detect::OracleSegmenter segmenter(store);
        rec.descriptors = photodesc::describe_photo(rec.image, detector, segmenter, cfg.photo, id);
    } else {
        const detect::HeuristicDetector detector;
        const detect::ChromaSegmenter segmenter;
        rec.descriptors = photodesc::describe_photo(rec.image, detector, segmenter, cfg.photo, id);
    }
    rec.spoken = photodesc::spoken_flags(rec.descriptors);
    return rec;
}

setdesc::SetDescriptors summarize_attempt(const std::vector<PhotoRecord>& photos,
                                          const SessionConfig& cfg) {
    std::vector<photodesc::PhotoDescriptors> descs;
    std::vector<CameraPose> poses;
    std::vector<Side> sides;
    for (const auto& p : photos) {
        descs.push_back(p.descriptors);
        poses.push_back(p.pose);
        if (!p.annotation.perspective_group.empty()) {
            sides.push_back(geometry::side_from_name(p.annotation.perspective_group));
        }
    }
    return setdesc::set_summary(descs, poses, sides, cfg.set);
}

void expect_accepted(const StepResult& r) {
    if (!r.accepted) throw Error("session flow violated the state machine: " + r.diagnostic);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SessionLog run_session(const TeachingPolicy& policy, const std::vector<scene::SceneSpec>& specs,
                       const SessionConfig& cfg, std::uint64_t seed) {
    policy.validate();
    if (specs.empty()) throw Error("run_session: no scene specs");
    if (static_cast<int>(specs.size()) != policy.objects) {
        throw Error("run_session: policy.objects does not match the number of scenes");
    }
    if (specs.size() < 2) {
        throw Error("run_session: need at least two objects to train a model");
    }
    for (const auto& s : specs) s.validate();

    Rng rng(seed);
    SessionLog log;
    log.seed = seed;

    Machine machine(policy.photos_per_object);

    for (std::size_t obj = 0; obj < specs.size(); ++obj) {
        const scene::SceneSpec& base = specs[obj];
        ObjectLog object_log;
        object_log.object_id = "obj" + std::to_string(obj);
        object_log.label = base.label;

        expect_accepted(machine.apply(EvTeach{object_log.object_id}));

        NoiseProfile noise{policy.crop_probability, policy.hand_probability,
                           policy.blur_probability};
        bool accepted = false;
        for (int attempt = 0; !accepted; ++attempt) {
            AttemptLog attempt_log;
            for (int i = 0; i < policy.photos_per_object; ++i) {
                const Side side =
                    policy.sides_to_visit[static_cast<std::size_t>(i) %
                                          policy.sides_to_visit.size()];
                const ShotPlan plan = plan_shot(base, policy, noise, side, rng);
                const std::string id = "photos/" + object_log.object_id + "-att" +
                                       std::to_string(attempt) + "-p" +
                                       (i < 10 ? "0" : "") + std::to_string(i) + ".png";
                const auto t0 = std::chrono::steady_clock::now();
                attempt_log.photos.push_back(take_photo(plan, id, cfg));
                log.timings.push_back({"photo " + id, seconds_since(t0)});
                expect_accepted(machine.apply(EvCapture{}));
            }
            attempt_log.summary = summarize_attempt(attempt_log.photos, cfg);

            const bool retrain = attempt < policy.max_retrains &&
                                 policy.retrain_rule.triggers(attempt_log.summary);
            attempt_log.decision = retrain ? "retrain" : "ok";
            object_log.attempts.push_back(std::move(attempt_log));
            if (retrain) {
                expect_accepted(machine.apply(EvRetrain{}));
                noise.crop *= policy.retrain_noise_scale;
                noise.hand *= policy.retrain_noise_scale;
                noise.blur *= policy.retrain_noise_scale;
            } else {
                expect_accepted(machine.apply(EvOk{}));
                accepted = true;
            }
        }

        expect_accepted(machine.apply(EvName{object_log.label}));
        // Model training is deferred until all objects are taught; the flow
        // still passes through Training so the UI states stay faithful.
        expect_accepted(machine.apply(EvTrainingDone{}));
        log.objects.push_back(std::move(object_log));
    }

    // Train one model on the kept sets.
    auto extractor = std::make_shared<recognizer::GridPoolExtractor>();
    std::vector<recognizer::TrainSample> samples;
    for (const auto& object_log : log.objects) {
        const AttemptLog& kept = object_log.attempts.back();
        for (const auto& photo : kept.photos) {
            samples.push_back({extractor->extract(photo.image, photo.id), object_log.label});
        }
    }
    const auto t0 = std::chrono::steady_clock::now();
    recognizer::TrainResult trained = recognizer::train(samples, cfg.train, extractor->info());
    log.timings.push_back({"train", seconds_since(t0)});
    log.model = std::move(trained.model);
    log.model.extractor_impl = extractor;

    // Held-out test photos from the same policy distribution.
    std::vector<recognizer::TestItem> test_items;
    const NoiseProfile noise{policy.crop_probability, policy.hand_probability,
                             policy.blur_probability};
    for (std::size_t obj = 0; obj < specs.size(); ++obj) {
        for (int i = 0; i < policy.test_photos_per_object; ++i) {
            const Side side =
                policy.sides_to_visit[static_cast<std::size_t>(i) % policy.sides_to_visit.size()];
            const ShotPlan plan = plan_shot(specs[obj], policy, noise, side, rng);
            const std::string id = "tests/obj" + std::to_string(obj) + "-t" +
                                   (i < 10 ? "0" : "") + std::to_string(i) + ".png";
            scene::Rendered rendered = scene::render_scene(plan.spec, plan.pose);
            TestPhotoRecord rec;
            rec.id = id;
            rec.truth = specs[obj].label;
            rec.annotation = std::move(rendered.annotation);
            rec.image = std::move(rendered.image);
            test_items.push_back({rec.image, rec.truth, rec.id});
            log.test_photos.push_back(std::move(rec));
        }
    }
    log.evaluation = recognizer::evaluate(log.model, test_items, cfg.rejection);
    return log;
}

std::vector<scene::SceneSpec> demo_scenes() {
    auto make = [](const std::string& label, std::array<std::uint8_t, 3> base,
                   std::array<std::uint8_t, 3> accent) {
        scene::SceneSpec spec;
        spec.label = label;
        spec.size = {0.18, 0.18, 0.18};
        for (int face = 0; face < 6; ++face) {
            // Shade each face a little so sides are tellable apart.
            auto shade = [&](std::uint8_t c) {
                const int v = static_cast<int>(c) - 12 * face;
                return static_cast<std::uint8_t>(std::max(0, v));
            };
            spec.faces[face].color = {shade(base[0]), shade(base[1]), shade(base[2])};
            spec.faces[face].accent = accent;
            spec.faces[face].checker_cells = 4;
        }
        spec.background.color = {214, 214, 214};
        spec.background.accent = {{176, 176, 176}};
        spec.background.cell_px = 12;
        return spec;
    };
    return {make("crinkle", {204, 40, 40}, {255, 150, 90}),
            make("ridge", {40, 170, 60}, {170, 235, 110}),
            make("wave", {50, 70, 215}, {130, 200, 250})};
}

TeachingPolicy demo_policy() {
    TeachingPolicy policy;
    policy.position_jitter_m = 0.015;
    policy.orientation_jitter_rad = 0.02;
    policy.sides_to_visit = {Side::PosZ, Side::PosX, Side::PosY};
    return policy;
}

}  // namespace teachset::session
