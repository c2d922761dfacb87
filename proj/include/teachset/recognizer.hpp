#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teachset/imaging.hpp"

namespace teachset::recognizer {

/// Fixed-dimension real feature vector.
struct FeatureVector {
    std::vector<double> values;
};

/// Feature extraction is pluggable; the built-in extractor mean-pools the
/// image onto an 8x8 grid per channel (dim 192, values in [0, 1]).
struct ExtractorInfo {
    std::string id = "grid8";
    std::map<std::string, std::string> params;
};

class FeatureExtractor {
public:
    virtual ~FeatureExtractor() = default;
    virtual FeatureVector extract(const imaging::ImageRGB& img,
                                  std::string_view photo_id = {}) const = 0;
    virtual ExtractorInfo info() const = 0;
};

class GridPoolExtractor final : public FeatureExtractor {
public:
    FeatureVector extract(const imaging::ImageRGB& img, std::string_view) const override;
    ExtractorInfo info() const override { return {}; }
    static constexpr int kGrid = 8;
    static constexpr std::size_t kDim = 3 * kGrid * kGrid;
};

/// Serves features precomputed elsewhere, keyed by photo id.
class FileFeatureExtractor final : public FeatureExtractor {
public:
    explicit FileFeatureExtractor(std::map<std::string, FeatureVector> features,
                                  std::string source = {});
    FeatureVector extract(const imaging::ImageRGB&, std::string_view photo_id) const override;
    ExtractorInfo info() const override;

private:
    std::map<std::string, FeatureVector, std::less<>> features_;
    std::string source_;
};

struct TrainConfig {
    int iterations = 500;
    double learning_rate = 0.01;

    void validate() const;
};

enum class LogBase { Natural, Base2 };

struct RejectionConfig {
    double entropy_threshold = 2.0;
    double confidence_threshold = 0.4;
    LogBase log_base = LogBase::Natural;

    void validate() const;
};

/// Multinomial logistic head over extracted features. Weights hold one row per
/// class with the bias folded in as the last column.
struct Model {
    std::vector<std::string> labels;
    std::size_t dim = 0;
    std::vector<double> weights;  // labels.size() x (dim + 1), row-major
    ExtractorInfo extractor;
    TrainConfig train_config;
    std::shared_ptr<const FeatureExtractor> extractor_impl;  // resolved, not serialized

    bool has_label(std::string_view label) const;
};

struct TrainSample {
    FeatureVector features;
    std::string label;
};

struct TrainResult {
    Model model;
    std::vector<double> loss_history;  // mean cross-entropy before each step, plus final
};

/// Mean cross-entropy of the affine softmax head; shared by training and the
/// gradient check.
double mean_cross_entropy(const std::vector<double>& weights, std::size_t n_classes,
                          std::size_t dim, const std::vector<TrainSample>& samples,
                          const std::vector<std::string>& labels);

/// Analytic gradient of mean_cross_entropy with respect to the weights.
std::vector<double> cross_entropy_gradient(const std::vector<double>& weights,
                                           std::size_t n_classes, std::size_t dim,
                                           const std::vector<TrainSample>& samples,
                                           const std::vector<std::string>& labels);

/// Full-batch gradient descent from zero weights: exactly cfg.iterations steps
/// at the fixed learning rate. Deterministic. Labels are ordered by first
/// appearance in the samples. Requires at least two distinct labels and
/// consistent feature dimensions.
TrainResult train(const std::vector<TrainSample>& samples, const TrainConfig& cfg,
                  ExtractorInfo extractor = {});

/// Softmax of the per-class affine scores, computed with max subtraction.
std::vector<double> predict_confidences(const Model& m, const FeatureVector& f);

/// -sum p log p in the configured base; p = 0 terms contribute zero.
double entropy(const std::vector<double>& confidences, LogBase base = LogBase::Natural);

/// Outcome of the rejection rule. class_index is empty when the model says
/// "don't know": entropy above threshold or top confidence below threshold.
struct Decision {
    std::optional<std::size_t> class_index;
    double entropy = 0.0;
};

Decision decide(const std::vector<double>& confidences, const RejectionConfig& cfg);

struct Prediction {
    std::optional<std::string> label;  // empty = don't know
    std::vector<double> confidences;
    double entropy = 0.0;
};

Prediction predict(const Model& m, const FeatureVector& f, const RejectionConfig& cfg);
Prediction predict_image(const Model& m, const imaging::ImageRGB& img,
                         const RejectionConfig& cfg, std::string_view photo_id = {});

struct TestItem {
    imaging::ImageRGB image;
    std::string label;
    std::string photo_id;
};

struct EvalOutcome {
    std::string photo_id;
    std::string truth;
    std::optional<std::string> outcome;  // empty = don't know
    bool correct = false;
};

/// accuracy = correct / total. A "don't know" on a trained class counts as
/// incorrect; on an untrained class it counts as correct.
struct Evaluation {
    double accuracy = 0.0;
    std::vector<EvalOutcome> outcomes;
};

Evaluation evaluate(const Model& m, const std::vector<TestItem>& test,
                    const RejectionConfig& cfg);

struct NamedTestSet {
    std::string name;
    std::vector<TestItem> items;
};

/// Accuracy of every model on every test set; rows follow the model order,
/// columns the set order. Models must share a label vocabulary.
struct AccuracyMatrix {
    std::vector<std::string> model_names;
    std::vector<std::string> set_names;
    std::vector<double> accuracy;  // row-major, models x sets

    double at(std::size_t model, std::size_t set) const {
        return accuracy[model * set_names.size() + set];
    }
};

AccuracyMatrix cross_evaluate(const std::vector<Model>& models,
                              const std::vector<std::string>& model_names,
                              const std::vector<NamedTestSet>& testsets,
                              const RejectionConfig& cfg);

}  // namespace teachset::recognizer
