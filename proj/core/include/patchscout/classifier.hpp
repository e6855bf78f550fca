#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "patchscout/encoder.hpp"

namespace patchscout {

// Standard logistic function, 1/(1+exp(-z)). Strictly inside (0,1).
double sigmoid(double z);

// Weighted binary cross entropy for one sample. `probability` is clamped to
// [1e-12, 1-1e-12] before the logs; the positive weight applies only when
// label == 1, so w = 1 recovers plain BCE.
double weighted_bce(double probability, int label, double positive_weight);

// Linear scoring head over encoder features.
struct ClassifierHead {
    std::vector<double> weights;
    double bias = 0.0;

    int dim() const { return static_cast<int>(weights.size()); }
    double logit(const std::vector<double>& features) const;
    double probability(const std::vector<double>& features) const;
};

// Serialized as JSON with a format-version field so a stale file fails
// loudly instead of silently misbehaving.
std::string save_head(const ClassifierHead& head);
ClassifierHead load_head(const std::string& text);

struct TrainConfig {
    double learning_rate = 1e-4;
    double positive_weight = 10.0;
    int epochs = 10;
    int batch_size = 32;
    uint64_t seed = 1;
};

struct TrainResult {
    ClassifierHead head;
    // Mean weighted-BCE training loss per epoch, in order.
    std::vector<double> epoch_losses;
};

// Mini-batch gradient descent on the weighted BCE objective, mean-reduced
// per batch. Deterministic for a fixed seed: sample order is shuffled with
// a self-contained Fisher-Yates pass so results do not depend on the
// standard library's shuffle implementation. Throws ValidationError when
// the corpus is empty or contains a single class.
TrainResult train_head(const std::vector<std::vector<double>>& features,
                       const std::vector<int>& labels,
                       const TrainConfig& config);

// Gradient of the mean weighted BCE of one batch with respect to head
// weights and bias, exposed for finite-difference checking.
void loss_gradient(const ClassifierHead& head,
                   const std::vector<std::vector<double>>& features,
                   const std::vector<int>& labels, double positive_weight,
                   std::vector<double>& grad_weights, double& grad_bias);

double mean_loss(const ClassifierHead& head,
                 const std::vector<std::vector<double>>& features,
                 const std::vector<int>& labels, double positive_weight);

} // namespace patchscout
