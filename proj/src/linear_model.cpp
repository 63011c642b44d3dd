#include "adme/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "adme/error.hpp"

namespace adme {

namespace {

void check_training_input(const Matrix& X, const std::vector<int>& labels, int num_classes) {
    if (X.rows() == 0) throw TrainError("training requires at least one sample");
    if (static_cast<Eigen::Index>(labels.size()) != X.rows())
        throw DimensionError("labels/features row count mismatch");
    if (num_classes < 2) throw TrainError("training requires at least two classes");
    std::vector<long> counts(static_cast<std::size_t>(num_classes), 0);
    for (int y : labels) {
        if (y < 0 || y >= num_classes)
            throw TrainError("label out of range: " + std::to_string(y));
        ++counts[static_cast<std::size_t>(y)];
    }
    for (int c = 0; c < num_classes; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0)
            throw TrainError("class " + std::to_string(c) + " absent from labels");
    }
}

}  // namespace

Vector softmax(const Vector& logits) {
    Vector shifted = logits.array() - logits.maxCoeff();
    Vector e = shifted.array().exp();
    return e / e.sum();
}

double logistic_loss_and_grad(const Matrix& weights, const Vector& bias, const Matrix& X,
                              const std::vector<int>& labels, double l2_strength,
                              Matrix& grad_weights, Vector& grad_bias) {
    const Eigen::Index n = X.rows();
    grad_weights = Matrix::Zero(weights.rows(), weights.cols());
    grad_bias = Vector::Zero(bias.size());
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Vector logits = weights * X.row(i).transpose() + bias;
        Vector p = softmax(logits);
        int y = labels[static_cast<std::size_t>(i)];
        loss -= std::log(std::max(p(y), 1e-300));
        Vector delta = p;
        delta(y) -= 1.0;
        grad_weights.noalias() += delta * X.row(i);
        grad_bias += delta;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    loss *= inv_n;
    grad_weights *= inv_n;
    grad_bias *= inv_n;
    loss += 0.5 * l2_strength * weights.squaredNorm();
    grad_weights += l2_strength * weights;
    return loss;
}

LinearModel train_logistic(const Matrix& X, const std::vector<int>& labels, int num_classes,
                           const LinearHyper& hyper) {
    check_training_input(X, labels, num_classes);
    LinearModel model;
    model.kind = LinearKind::Logistic;
    model.weights = Matrix::Zero(num_classes, X.cols());
    model.bias = Vector::Zero(num_classes);

    Matrix gw;
    Vector gb;
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        logistic_loss_and_grad(model.weights, model.bias, X, labels, hyper.l2_strength, gw, gb);
        model.weights -= hyper.learning_rate * gw;
        model.bias -= hyper.learning_rate * gb;
    }
    return model;
}

LinearModel train_linear_svm(const Matrix& X, const std::vector<int>& labels, int num_classes,
                             const LinearHyper& hyper) {
    check_training_input(X, labels, num_classes);
    LinearModel model;
    model.kind = LinearKind::Svm;
    model.weights = Matrix::Zero(num_classes, X.cols());
    model.bias = Vector::Zero(num_classes);

    const Eigen::Index n = X.rows();
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        Matrix gw = hyper.l2_strength * model.weights;
        Vector gb = Vector::Zero(num_classes);
        for (Eigen::Index i = 0; i < n; ++i) {
            Vector scores = model.weights * X.row(i).transpose() + model.bias;
            int yi = labels[static_cast<std::size_t>(i)];
            for (int c = 0; c < num_classes; ++c) {
                double y = (c == yi) ? 1.0 : -1.0;
                if (y * scores(c) < 1.0) {
                    gw.row(c).noalias() -= (y * inv_n) * X.row(i);
                    gb(c) -= y * inv_n;
                }
            }
        }
        model.weights -= hyper.learning_rate * gw;
        model.bias -= hyper.learning_rate * gb;
    }
    return model;
}

Vector class_scores(const LinearModel& model, const Vector& x) {
    if (x.size() != model.weights.cols())
        throw DimensionError("feature length " + std::to_string(x.size()) +
                             " does not match model feature length " +
                             std::to_string(model.weights.cols()));
    return model.weights * x + model.bias;
}

int predict_class(const LinearModel& model, const Vector& x) {
    Vector scores = class_scores(model, x);
    int best = 0;
    for (int c = 1; c < scores.size(); ++c) {
        if (scores(c) > scores(best)) best = c;
    }
    return best;
}

void save_linear(const LinearModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write linear model: " + path);
    out << "linear 1\n"
        << static_cast<int>(model.kind) << ' ' << model.weights.rows() << ' '
        << model.weights.cols() << '\n';
    out.precision(17);
    for (Eigen::Index r = 0; r < model.weights.rows(); ++r) {
        for (Eigen::Index c = 0; c < model.weights.cols(); ++c) out << model.weights(r, c) << ' ';
        out << model.bias(r) << '\n';
    }
}

LinearModel load_linear(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open linear model: " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "linear" || version != 1)
        throw ParseError("not a linear model file (or unsupported version): " + path);
    int kind = 0;
    Eigen::Index rows = 0, cols = 0;
    in >> kind >> rows >> cols;
    LinearModel model;
    model.kind = static_cast<LinearKind>(kind);
    model.weights.resize(rows, cols);
    model.bias.resize(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) in >> model.weights(r, c);
        in >> model.bias(r);
    }
    if (!in) throw ParseError("truncated linear model: " + path);
    return model;
}

}  // namespace adme
