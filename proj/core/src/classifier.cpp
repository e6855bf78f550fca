#include "patchscout/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "patchscout/errors.hpp"

namespace patchscout {

namespace {

constexpr double kProbEps = 1e-12;
constexpr int kHeadFormatVersion = 1;

double clamp_probability(double p) {
    return std::min(1.0 - kProbEps, std::max(kProbEps, p));
}

} // namespace

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

double weighted_bce(double probability, int label, double positive_weight) {
    double p = clamp_probability(probability);
    if (label == 1) return -positive_weight * std::log(p);
    return -std::log(1.0 - p);
}

double ClassifierHead::logit(const std::vector<double>& features) const {
    if (features.size() != weights.size()) {
        throw ValidationError("feature dimension " +
                              std::to_string(features.size()) +
                              " does not match head dimension " +
                              std::to_string(weights.size()));
    }
    double z = bias;
    for (size_t i = 0; i < weights.size(); ++i) z += weights[i] * features[i];
    return z;
}

double ClassifierHead::probability(const std::vector<double>& features) const {
    return sigmoid(logit(features));
}

std::string save_head(const ClassifierHead& head) {
    nlohmann::ordered_json j;
    j["format_version"] = kHeadFormatVersion;
    j["dim"] = head.dim();
    j["bias"] = head.bias;
    j["weights"] = head.weights;
    return j.dump();
}

ClassifierHead load_head(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad head file: ") + e.what());
    }
    if (!j.is_object() || !j.contains("format_version")) {
        throw ParseError("bad head file: missing format_version");
    }
    if (j["format_version"].get<int>() != kHeadFormatVersion) {
        throw ValidationError("unsupported head format version " +
                              j["format_version"].dump());
    }
    ClassifierHead head;
    try {
        head.bias = j.at("bias").get<double>();
        head.weights = j.at("weights").get<std::vector<double>>();
        if (j.at("dim").get<int>() != head.dim()) {
            throw ValidationError("head dim field disagrees with weight count");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad head file: ") + e.what());
    }
    return head;
}

void loss_gradient(const ClassifierHead& head,
                   const std::vector<std::vector<double>>& features,
                   const std::vector<int>& labels, double positive_weight,
                   std::vector<double>& grad_weights, double& grad_bias) {
    grad_weights.assign(head.weights.size(), 0.0);
    grad_bias = 0.0;
    if (features.empty()) return;
    for (size_t n = 0; n < features.size(); ++n) {
        double p = sigmoid(head.logit(features[n]));
        double w_eff = labels[n] == 1 ? positive_weight : 1.0;
        double dz = w_eff * (p - static_cast<double>(labels[n]));
        grad_bias += dz;
        const std::vector<double>& x = features[n];
        for (size_t i = 0; i < x.size(); ++i) grad_weights[i] += dz * x[i];
    }
    double inv = 1.0 / static_cast<double>(features.size());
    grad_bias *= inv;
    for (double& g : grad_weights) g *= inv;
}

double mean_loss(const ClassifierHead& head,
                 const std::vector<std::vector<double>>& features,
                 const std::vector<int>& labels, double positive_weight) {
    if (features.empty()) return 0.0;
    double total = 0.0;
    for (size_t n = 0; n < features.size(); ++n) {
        double p = sigmoid(head.logit(features[n]));
        total += weighted_bce(p, labels[n], positive_weight);
    }
    return total / static_cast<double>(features.size());
}

TrainResult train_head(const std::vector<std::vector<double>>& features,
                       const std::vector<int>& labels,
                       const TrainConfig& config) {
    if (features.empty()) throw ValidationError("training corpus is empty");
    if (features.size() != labels.size()) {
        throw ValidationError("feature/label count mismatch");
    }
    bool has_positive = false;
    bool has_negative = false;
    for (int y : labels) {
        if (y == 1) has_positive = true;
        else if (y == 0) has_negative = true;
        else throw ValidationError("labels must be 0 or 1 for training");
    }
    if (!has_positive || !has_negative) {
        throw ValidationError(
            "training corpus contains a single class; need both labels");
    }
    if (config.learning_rate <= 0.0) throw ValidationError("learning_rate must be > 0");
    if (config.positive_weight <= 0.0) throw ValidationError("positive_weight must be > 0");
    if (config.batch_size <= 0) throw ValidationError("batch_size must be > 0");

    const size_t dim = features.front().size();
    for (const auto& x : features) {
        if (x.size() != dim) throw ValidationError("inconsistent feature dimensions");
    }

    TrainResult result;
    result.head.weights.assign(dim, 0.0);
    result.head.bias = 0.0;

    std::vector<size_t> index(features.size());
    std::iota(index.begin(), index.end(), size_t{0});
    // 64-bit multiplicative state, advanced the same way on every platform.
    uint64_t rng = config.seed ? config.seed : 0x9e3779b97f4a7c15ull;
    auto next_rng = [&rng]() {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        return rng;
    };

    std::vector<double> grad(dim, 0.0);
    std::vector<std::vector<double>> batch_x;
    std::vector<int> batch_y;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (size_t i = index.size(); i > 1; --i) {
            size_t j = next_rng() % i;
            std::swap(index[i - 1], index[j]);
        }
        double epoch_loss = 0.0;
        size_t batches = 0;
        for (size_t at = 0; at < index.size(); at += static_cast<size_t>(config.batch_size)) {
            size_t end = std::min(index.size(), at + static_cast<size_t>(config.batch_size));
            batch_x.clear();
            batch_y.clear();
            for (size_t k = at; k < end; ++k) {
                batch_x.push_back(features[index[k]]);
                batch_y.push_back(labels[index[k]]);
            }
            epoch_loss += mean_loss(result.head, batch_x, batch_y, config.positive_weight);
            ++batches;
            double grad_bias = 0.0;
            loss_gradient(result.head, batch_x, batch_y, config.positive_weight,
                          grad, grad_bias);
            for (size_t i = 0; i < dim; ++i) {
                result.head.weights[i] -= config.learning_rate * grad[i];
            }
            result.head.bias -= config.learning_rate * grad_bias;
        }
        result.epoch_losses.push_back(epoch_loss / static_cast<double>(batches));
    }
    return result;
}

} // namespace patchscout
