#include "teachset/setdesc.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "teachset/error.hpp"

namespace teachset::setdesc {

void SetDescConfig::validate() const {
    if (!(sd_max > 0.0)) throw Error("SetDescConfig: sd_max must be > 0");
    if (side_scale < 0.0) throw Error("SetDescConfig: side_scale must be >= 0");
}

namespace {

double clamp_pct(double pct, const SetDescConfig& cfg) {
    if (!cfg.clamp_at_100) return std::max(pct, 0.0);
    return std::clamp(pct, 0.0, 100.0);
}

}  // namespace

double position_spread(const std::vector<geometry::Vec3>& positions) {
    if (positions.empty()) throw Error("position_spread: empty position list");
    geometry::Vec3 centroid;
    for (const auto& p : positions) centroid += p;
    centroid = centroid / static_cast<double>(positions.size());
    double acc = 0.0;
    for (const auto& p : positions) {
        const geometry::Vec3 d = p - centroid;
        acc += dot(d, d);
    }
    return std::sqrt(acc / static_cast<double>(positions.size()));
}

double orientation_spread(const std::vector<geometry::CameraPose>& poses) {
    if (poses.empty()) throw Error("orientation_spread: empty pose list");
    geometry::Vec3 sum;
    for (const auto& pose : poses) {
        pose.validate();
        sum += pose.view_dir;
    }
    const double norm = sum.norm();
    if (norm < 1e-9 * static_cast<double>(poses.size())) {
        throw Error("orientation_spread: view directions cancel out; no mean direction");
    }
    const geometry::Vec3 mean_dir = sum / norm;
    std::vector<double> dev(poses.size());
    double mean_dev = 0.0;
    for (std::size_t i = 0; i < poses.size(); ++i) {
        dev[i] = 1.0 - dot(poses[i].view_dir, mean_dir);
        mean_dev += dev[i];
    }
    mean_dev /= static_cast<double>(poses.size());
    double acc = 0.0;
    for (const double d : dev) acc += (d - mean_dev) * (d - mean_dev);
    return std::sqrt(acc / static_cast<double>(poses.size()));
}

double variation_in_size(const std::vector<geometry::Vec3>& positions,
                         const SetDescConfig& cfg) {
    cfg.validate();
    return clamp_pct(position_spread(positions) / cfg.sd_max * 100.0, cfg);
}

double variation_in_perspective(const std::vector<geometry::Side>& sides,
                                const SetDescConfig& cfg) {
    cfg.validate();
    const std::set<geometry::Side> distinct(sides.begin(), sides.end());
    return static_cast<double>(distinct.size()) * cfg.side_scale;
}

double variation_in_background(const std::vector<geometry::CameraPose>& poses,
                               const SetDescConfig& cfg) {
    cfg.validate();
    if (poses.empty()) throw Error("variation_in_background: empty pose list");
    std::vector<geometry::Vec3> positions;
    positions.reserve(poses.size());
    for (const auto& p : poses) positions.push_back(p.position);
    const double spread = std::max(position_spread(positions), orientation_spread(poses));
    return clamp_pct(spread / cfg.sd_max * 100.0, cfg);
}

FlagPercentages aggregate_flags(const std::vector<photodesc::PhotoDescriptors>& descriptors) {
    if (descriptors.empty()) throw Error("aggregate_flags: empty descriptor list");
    FlagPercentages out;
    for (const auto& d : descriptors) {
        out.small += d.small ? 1.0 : 0.0;
        out.cropped += d.cropped ? 1.0 : 0.0;
        out.blurry += d.blurry ? 1.0 : 0.0;
        out.hand += d.hand ? 1.0 : 0.0;
        out.object_missing += d.object_missing ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(descriptors.size());
    out.small = 100.0 * out.small / n;
    out.cropped = 100.0 * out.cropped / n;
    out.blurry = 100.0 * out.blurry / n;
    out.hand = 100.0 * out.hand / n;
    out.object_missing = 100.0 * out.object_missing / n;
    return out;
}

SetDescriptors set_summary(const std::vector<photodesc::PhotoDescriptors>& descriptors,
                           const std::optional<std::vector<geometry::CameraPose>>& poses,
                           const std::vector<geometry::Side>& sides,
                           const SetDescConfig& cfg) {
    cfg.validate();
    if (descriptors.empty()) throw Error("set_summary: empty training set");
    if (poses && poses->size() != descriptors.size()) {
        throw Error("set_summary: pose list length does not match photo count");
    }
    if (sides.size() > descriptors.size()) {
        throw Error("set_summary: more sides than photos");
    }
    SetDescriptors out;
    out.photo_count = descriptors.size();
    out.flag_percentages = aggregate_flags(descriptors);
    out.var_perspective_pct = variation_in_perspective(sides, cfg);
    if (poses) {
        std::vector<geometry::Vec3> positions;
        positions.reserve(poses->size());
        for (const auto& p : *poses) positions.push_back(p.position);
        const double size_raw = position_spread(positions) / cfg.sd_max * 100.0;
        const double bg_raw =
            std::max(position_spread(positions), orientation_spread(*poses)) / cfg.sd_max * 100.0;
        out.var_size_raw_pct = size_raw;
        out.var_background_raw_pct = bg_raw;
        out.var_size_pct = clamp_pct(size_raw, cfg);
        out.var_background_pct = clamp_pct(bg_raw, cfg);
    }
    return out;
}

}  // namespace teachset::setdesc
