#include "teachset/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "teachset/error.hpp"

namespace teachset::recognizer {

FeatureVector GridPoolExtractor::extract(const imaging::ImageRGB& img, std::string_view) const {
    if (!img.valid()) throw Error("GridPoolExtractor: invalid image buffer");
    FeatureVector out;
    out.values.assign(kDim, 0.0);
    const int w = img.width;
    const int h = img.height;
    for (int gy = 0; gy < kGrid; ++gy) {
        int y0 = gy * h / kGrid;
        int y1 = (gy + 1) * h / kGrid;
        if (y1 <= y0) y1 = std::min(y0 + 1, h);
        y0 = std::min(y0, h - 1);
        for (int gx = 0; gx < kGrid; ++gx) {
            int x0 = gx * w / kGrid;
            int x1 = (gx + 1) * w / kGrid;
            if (x1 <= x0) x1 = std::min(x0 + 1, w);
            x0 = std::min(x0, w - 1);
            double acc[3] = {0, 0, 0};
            int count = 0;
            for (int y = y0; y < std::max(y1, y0 + 1); ++y) {
                for (int x = x0; x < std::max(x1, x0 + 1); ++x) {
                    const std::uint8_t* p = img.px(x, y);
                    acc[0] += p[0];
                    acc[1] += p[1];
                    acc[2] += p[2];
                    ++count;
                }
            }
            for (int c = 0; c < 3; ++c) {
                out.values[static_cast<std::size_t>(c) * kGrid * kGrid + gy * kGrid + gx] =
                    acc[c] / (255.0 * count);
            }
        }
    }
    return out;
}

FileFeatureExtractor::FileFeatureExtractor(std::map<std::string, FeatureVector> features,
                                           std::string source)
    : source_(std::move(source)) {
    for (auto& [k, v] : features) features_.emplace(k, std::move(v));
    if (features_.empty()) throw Error("FileFeatureExtractor: empty feature table");
}

FeatureVector FileFeatureExtractor::extract(const imaging::ImageRGB&,
                                            std::string_view photo_id) const {
    const auto it = features_.find(photo_id);
    if (it == features_.end()) {
        throw Error("FileFeatureExtractor: no features for photo '" + std::string(photo_id) +
                    "'");
    }
    return it->second;
}

ExtractorInfo FileFeatureExtractor::info() const {
    ExtractorInfo info;
    info.id = "file";
    if (!source_.empty()) info.params["path"] = source_;
    return info;
}

void TrainConfig::validate() const {
    if (iterations < 1) throw Error("TrainConfig: iterations must be >= 1");
    if (!(learning_rate > 0.0)) throw Error("TrainConfig: learning_rate must be > 0");
}

void RejectionConfig::validate() const {
    if (entropy_threshold < 0.0 || confidence_threshold < 0.0) {
        throw Error("RejectionConfig: thresholds must be >= 0");
    }
}

bool Model::has_label(std::string_view label) const {
    return std::find(labels.begin(), labels.end(), label) != labels.end();
}

namespace {

std::vector<double> softmax_scores(const std::vector<double>& weights, std::size_t n_classes,
                                   std::size_t dim, const std::vector<double>& f) {
    std::vector<double> scores(n_classes, 0.0);
    const std::size_t row = dim + 1;
    for (std::size_t c = 0; c < n_classes; ++c) {
        const double* w = weights.data() + c * row;
        double s = w[dim];  // bias
        for (std::size_t j = 0; j < dim; ++j) s += w[j] * f[j];
        scores[c] = s;
    }
    const double max_score = *std::max_element(scores.begin(), scores.end());
    double denom = 0.0;
    for (double& s : scores) {
        s = std::exp(s - max_score);
        denom += s;
    }
    for (double& s : scores) s /= denom;
    return scores;
}

std::vector<std::size_t> label_indices(const std::vector<TrainSample>& samples,
                                       const std::vector<std::string>& labels) {
    std::vector<std::size_t> idx(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto it = std::find(labels.begin(), labels.end(), samples[i].label);
        if (it == labels.end()) throw Error("train: sample label missing from label list");
        idx[i] = static_cast<std::size_t>(it - labels.begin());
    }
    return idx;
}

}  // namespace

double mean_cross_entropy(const std::vector<double>& weights, std::size_t n_classes,
                          std::size_t dim, const std::vector<TrainSample>& samples,
                          const std::vector<std::string>& labels) {
    const std::vector<std::size_t> targets = label_indices(samples, labels);
    double loss = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::vector<double> p =
            softmax_scores(weights, n_classes, dim, samples[i].features.values);
        loss -= std::log(p[targets[i]]);
    }
    return loss / static_cast<double>(samples.size());
}

std::vector<double> cross_entropy_gradient(const std::vector<double>& weights,
                                           std::size_t n_classes, std::size_t dim,
                                           const std::vector<TrainSample>& samples,
                                           const std::vector<std::string>& labels) {
    const std::vector<std::size_t> targets = label_indices(samples, labels);
    const std::size_t row = dim + 1;
    std::vector<double> grad(n_classes * row, 0.0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::vector<double>& f = samples[i].features.values;
        const std::vector<double> p = softmax_scores(weights, n_classes, dim, f);
        for (std::size_t c = 0; c < n_classes; ++c) {
            const double err = p[c] - (targets[i] == c ? 1.0 : 0.0);
            double* g = grad.data() + c * row;
            for (std::size_t j = 0; j < dim; ++j) g[j] += err * f[j];
            g[dim] += err;
        }
    }
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    for (double& g : grad) g *= inv_n;
    return grad;
}

TrainResult train(const std::vector<TrainSample>& samples, const TrainConfig& cfg,
                  ExtractorInfo extractor) {
    cfg.validate();
    if (samples.empty()) throw Error("train: no samples");

    std::vector<std::string> labels;  // ordered by first appearance
    for (const auto& s : samples) {
        if (std::find(labels.begin(), labels.end(), s.label) == labels.end()) {
            labels.push_back(s.label);
        }
    }
    if (labels.size() < 2) throw Error("train: need at least two distinct labels");

    const std::size_t dim = samples.front().features.values.size();
    for (const auto& s : samples) {
        if (s.features.values.size() != dim) {
            throw Error("train: inconsistent feature dimensions");
        }
    }

    const std::size_t n_classes = labels.size();
    const std::size_t row = dim + 1;
    std::vector<double> weights(n_classes * row, 0.0);

    TrainResult result;
    result.loss_history.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
    for (int it = 0; it < cfg.iterations; ++it) {
        result.loss_history.push_back(
            mean_cross_entropy(weights, n_classes, dim, samples, labels));
        const std::vector<double> grad =
            cross_entropy_gradient(weights, n_classes, dim, samples, labels);
        for (std::size_t k = 0; k < weights.size(); ++k) {
            weights[k] -= cfg.learning_rate * grad[k];
        }
    }
    result.loss_history.push_back(mean_cross_entropy(weights, n_classes, dim, samples, labels));

    Model m;
    m.labels = std::move(labels);
    m.dim = dim;
    m.weights = std::move(weights);
    m.extractor = std::move(extractor);
    m.train_config = cfg;
    result.model = std::move(m);
    return result;
}

std::vector<double> predict_confidences(const Model& m, const FeatureVector& f) {
    if (f.values.size() != m.dim) {
        throw Error("predict_confidences: feature dimension mismatch");
    }
    return softmax_scores(m.weights, m.labels.size(), m.dim, f.values);
}

double entropy(const std::vector<double>& confidences, LogBase base) {
    double h = 0.0;
    for (const double p : confidences) {
        if (p > 0.0) h -= p * std::log(p);
    }
    if (base == LogBase::Base2) h /= std::log(2.0);
    return h;
}

Decision decide(const std::vector<double>& confidences, const RejectionConfig& cfg) {
    cfg.validate();
    if (confidences.empty()) throw Error("decide: empty confidence vector");
    Decision d;
    d.entropy = entropy(confidences, cfg.log_base);
    std::size_t best = 0;
    for (std::size_t i = 1; i < confidences.size(); ++i) {
        if (confidences[i] > confidences[best]) best = i;  // ties keep class order
    }
    const bool reject =
        d.entropy > cfg.entropy_threshold || confidences[best] < cfg.confidence_threshold;
    if (!reject) d.class_index = best;
    return d;
}

Prediction predict(const Model& m, const FeatureVector& f, const RejectionConfig& cfg) {
    Prediction p;
    p.confidences = predict_confidences(m, f);
    const Decision d = decide(p.confidences, cfg);
    p.entropy = d.entropy;
    if (d.class_index) p.label = m.labels[*d.class_index];
    return p;
}

Prediction predict_image(const Model& m, const imaging::ImageRGB& img,
                         const RejectionConfig& cfg, std::string_view photo_id) {
    if (!m.extractor_impl) throw Error("predict_image: model has no feature extractor bound");
    return predict(m, m.extractor_impl->extract(img, photo_id), cfg);
}

Evaluation evaluate(const Model& m, const std::vector<TestItem>& test,
                    const RejectionConfig& cfg) {
    if (test.empty()) throw Error("evaluate: empty test set");
    Evaluation ev;
    ev.outcomes.reserve(test.size());
    std::size_t correct = 0;
    for (const auto& item : test) {
        const Prediction p = predict_image(m, item.image, cfg, item.photo_id);
        EvalOutcome o;
        o.photo_id = item.photo_id;
        o.truth = item.label;
        o.outcome = p.label;
        o.correct = p.label ? (*p.label == item.label) : !m.has_label(item.label);
        if (o.correct) ++correct;
        ev.outcomes.push_back(std::move(o));
    }
    ev.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
    return ev;
}

AccuracyMatrix cross_evaluate(const std::vector<Model>& models,
                              const std::vector<std::string>& model_names,
                              const std::vector<NamedTestSet>& testsets,
                              const RejectionConfig& cfg) {
    if (!model_names.empty() && model_names.size() != models.size()) {
        throw Error("cross_evaluate: model name count mismatch");
    }
    if (models.size() > 1) {
        const std::set<std::string> vocab(models.front().labels.begin(),
                                          models.front().labels.end());
        for (const auto& m : models) {
            if (std::set<std::string>(m.labels.begin(), m.labels.end()) != vocab) {
                throw Error("cross_evaluate: models do not share a label vocabulary");
            }
        }
    }
    AccuracyMatrix out;
    for (std::size_t i = 0; i < models.size(); ++i) {
        out.model_names.push_back(model_names.empty() ? "model-" + std::to_string(i)
                                                      : model_names[i]);
    }
    for (const auto& ts : testsets) out.set_names.push_back(ts.name);
    out.accuracy.reserve(models.size() * testsets.size());
    for (const auto& m : models) {
        for (const auto& ts : testsets) {
            out.accuracy.push_back(evaluate(m, ts.items, cfg).accuracy);
        }
    }
    return out;
}

}  // namespace teachset::recognizer
