#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adme/types.hpp"

namespace adme {

enum class LinearKind : int { Logistic = 0, Svm = 1 };

struct LinearModel {
    LinearKind kind = LinearKind::Logistic;
    Matrix weights;  // [num_classes x feature_len]
    Vector bias;     // [num_classes]
};

struct LinearHyper {
    double l2_strength = 1e-3;
    double learning_rate = 0.5;
    int epochs = 500;
    std::uint64_t seed = 0;  // unused by the deterministic full-batch solvers
};

// Multinomial softmax cross-entropy with L2 penalty, full-batch gradient
// descent from zero init. X is [n_samples x feature_len]; labels in
// [0, num_classes). Every class must appear at least once.
LinearModel train_logistic(const Matrix& X, const std::vector<int>& labels, int num_classes,
                           const LinearHyper& hyper = {});

// One-vs-rest hinge loss with L2, full-batch subgradient descent.
LinearModel train_linear_svm(const Matrix& X, const std::vector<int>& labels, int num_classes,
                             const LinearHyper& hyper = {});

Vector class_scores(const LinearModel& model, const Vector& x);
Vector softmax(const Vector& logits);

// Argmax over class scores; ties break to the lowest class index.
int predict_class(const LinearModel& model, const Vector& x);

// Mean loss and gradients at the given parameters; exposed so tests can
// check the analytic gradient against finite differences.
double logistic_loss_and_grad(const Matrix& weights, const Vector& bias, const Matrix& X,
                              const std::vector<int>& labels, double l2_strength,
                              Matrix& grad_weights, Vector& grad_bias);

void save_linear(const LinearModel& model, const std::string& path);
LinearModel load_linear(const std::string& path);

}  // namespace adme
