#include "teachset/metrics.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "teachset/error.hpp"

namespace teachset::metrics {

double shannon_wiener(const std::vector<std::string>& groups) {
    if (groups.empty()) throw Error("shannon_wiener: empty group list");
    std::map<std::string, std::size_t> counts;
    for (const auto& g : groups) ++counts[g];
    const double n = static_cast<double>(groups.size());
    double h = 0.0;
    for (const auto& [_, c] : counts) {
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h;
}

double annotated_size_variation(const std::vector<std::optional<geometry::BBox>>& bboxes) {
    if (bboxes.empty()) throw Error("annotated_size_variation: empty bbox list");
    std::vector<double> fractions;
    fractions.reserve(bboxes.size());
    for (const auto& b : bboxes) {
        fractions.push_back(b ? geometry::bbox_area_fraction(*b) : 0.0);
    }
    double mean = 0.0;
    for (const double f : fractions) mean += f;
    mean /= static_cast<double>(fractions.size());
    double acc = 0.0;
    for (const double f : fractions) acc += (f - mean) * (f - mean);
    return std::sqrt(acc / static_cast<double>(fractions.size()));
}

bool annotated_small(const std::optional<geometry::BBox>& bbox) {
    return bbox && geometry::bbox_area_fraction(*bbox) < 0.125;
}

Correlation pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw Error("pearson: series lengths differ");
    if (xs.size() < 2) throw Error("pearson: need at least two points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    Correlation out;
    out.n = xs.size();
    if (sxx == 0.0 || syy == 0.0) {
        out.defined = false;
        return out;
    }
    out.defined = true;
    out.r = sxy / std::sqrt(sxx * syy);
    return out;
}

namespace {

using Pair = std::pair<setdesc::SetDescriptors, SetAnnotationSummary>;

Correlation paired_pearson(const std::vector<Pair>& pairs,
                           const std::function<std::optional<double>(const Pair&)>& est,
                           const std::function<double(const Pair&)>& ann) {
    std::vector<double> xs, ys;
    for (const auto& p : pairs) {
        const std::optional<double> e = est(p);
        if (!e) continue;
        xs.push_back(ann(p));  // annotations on x, estimates on y
        ys.push_back(*e);
    }
    if (xs.size() < 2) {
        Correlation c;
        c.n = xs.size();
        c.defined = false;
        return c;
    }
    return pearson(xs, ys);
}

}  // namespace

std::vector<DescriptorCorrelation> correlate_descriptors(const std::vector<Pair>& pairs) {
    if (pairs.size() < 2) throw Error("correlate_descriptors: need at least two sets");
    std::vector<DescriptorCorrelation> out;
    auto add = [&](std::string name, std::function<std::optional<double>(const Pair&)> est,
                   std::function<double(const Pair&)> ann) {
        out.push_back({std::move(name), paired_pearson(pairs, est, ann)});
    };
    add(
        "variation_in_size", [](const Pair& p) { return p.first.var_size_pct; },
        [](const Pair& p) { return p.second.size_variation; });
    add(
        "variation_in_perspective",
        [](const Pair& p) { return std::optional<double>(p.first.var_perspective_pct); },
        [](const Pair& p) { return p.second.perspective_diversity; });
    add(
        "variation_in_background", [](const Pair& p) { return p.first.var_background_pct; },
        [](const Pair& p) { return p.second.background_diversity; });
    add(
        "cropped_object",
        [](const Pair& p) { return std::optional<double>(p.first.flag_percentages.cropped); },
        [](const Pair& p) { return static_cast<double>(p.second.cropped_count); });
    add(
        "hand_in_photo",
        [](const Pair& p) { return std::optional<double>(p.first.flag_percentages.hand); },
        [](const Pair& p) { return static_cast<double>(p.second.hand_count); });
    add(
        "blurry_photo",
        [](const Pair& p) { return std::optional<double>(p.first.flag_percentages.blurry); },
        [](const Pair& p) { return static_cast<double>(p.second.blurry_count); });
    add(
        "small_object",
        [](const Pair& p) { return std::optional<double>(p.first.flag_percentages.small); },
        [](const Pair& p) { return static_cast<double>(p.second.small_count); });
    return out;
}

SetAnnotationSummary summarize_annotations(const std::vector<PhotoAnnotation>& photos) {
    if (photos.empty()) throw Error("summarize_annotations: empty annotation list");
    SetAnnotationSummary out;
    out.photo_count = photos.size();
    std::vector<std::string> bg_groups, persp_groups;
    std::vector<std::optional<geometry::BBox>> bboxes;
    for (const auto& a : photos) {
        bg_groups.push_back(a.background_group);
        persp_groups.push_back(a.perspective_group);
        bboxes.push_back(a.bbox);
        if (a.cropped) ++out.cropped_count;
        if (a.hand) ++out.hand_count;
        if (a.blurry) ++out.blurry_count;
        if (annotated_small(a.bbox)) ++out.small_count;
    }
    out.size_variation = annotated_size_variation(bboxes);
    out.background_diversity = shannon_wiener(bg_groups);
    out.perspective_diversity = shannon_wiener(persp_groups);
    return out;
}

}  // namespace teachset::metrics
