#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "adme/error.hpp"
#include "adme/linear_model.hpp"
#include "adme/rng.hpp"

using namespace adme;

namespace {

// Linearly separable 2-class toy set (4 points).
Matrix separable_features() {
    Matrix X(4, 2);
    X << 1.0, 0.1, 0.9, 0.0, 0.0, 1.0, 0.1, 0.9;
    return X;
}
const std::vector<int> kSeparableLabels = {0, 0, 1, 1};

int accuracy_count(const LinearModel& model, const Matrix& X, const std::vector<int>& labels) {
    int correct = 0;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        if (predict_class(model, X.row(i).transpose()) == labels[static_cast<std::size_t>(i)])
            ++correct;
    return correct;
}

}  // namespace

TEST_SUITE("linear_model") {

TEST_CASE("logistic fits a separable toy set to training accuracy 1.0") {
    LinearModel model = train_logistic(separable_features(), kSeparableLabels, 2);
    CHECK(accuracy_count(model, separable_features(), kSeparableLabels) == 4);
}

TEST_CASE("single-class input is rejected") {
    Matrix X(2, 2);
    X << 1, 0, 0, 1;
    CHECK_THROWS_AS(train_logistic(X, {0, 0}, 1, {}), TrainError);
    CHECK_THROWS_AS(train_logistic(X, {1, 1}, 2, {}), TrainError);  // class 0 absent
    CHECK_THROWS_AS(train_linear_svm(X, {0, 0}, 1, {}), TrainError);
}

TEST_CASE("zero epochs leaves zero weights and uniform probabilities") {
    LinearHyper hyper;
    hyper.epochs = 0;
    LinearModel model = train_logistic(separable_features(), kSeparableLabels, 2, hyper);
    CHECK(model.weights.norm() == 0.0);
    Vector probs = softmax(class_scores(model, Vector::Zero(2)));
    CHECK(probs(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(predict_class(model, Vector::Zero(2)) == 0);  // tie breaks to class 0
}

TEST_CASE("logistic gradient matches central finite differences on a random 5x4 problem") {
    SplitMix64 rng(1234);
    Matrix X(5, 4);
    for (Eigen::Index r = 0; r < 5; ++r)
        for (Eigen::Index c = 0; c < 4; ++c) X(r, c) = rng.normal();
    std::vector<int> labels = {0, 1, 2, 1, 0};
    const int num_classes = 3;
    Matrix weights(num_classes, 4);
    for (Eigen::Index r = 0; r < num_classes; ++r)
        for (Eigen::Index c = 0; c < 4; ++c) weights(r, c) = 0.3 * rng.normal();
    Vector bias(num_classes);
    for (Eigen::Index r = 0; r < num_classes; ++r) bias(r) = 0.1 * rng.normal();
    const double l2 = 1e-3;

    Matrix grad_w;
    Vector grad_b;
    logistic_loss_and_grad(weights, bias, X, labels, l2, grad_w, grad_b);

    const double h = 1e-6;
    Matrix gw_dummy;
    Vector gb_dummy;
    auto loss_at = [&](const Matrix& w, const Vector& b) {
        return logistic_loss_and_grad(w, b, X, labels, l2, gw_dummy, gb_dummy);
    };
    for (Eigen::Index r = 0; r < num_classes; ++r) {
        for (Eigen::Index c = 0; c < 4; ++c) {
            Matrix wp = weights, wm = weights;
            wp(r, c) += h;
            wm(r, c) -= h;
            double fd = (loss_at(wp, bias) - loss_at(wm, bias)) / (2 * h);
            double rel = std::abs(grad_w(r, c) - fd) /
                         std::max({1.0, std::abs(grad_w(r, c)), std::abs(fd)});
            CHECK(rel < 1e-5);
        }
        Vector bp = bias, bm = bias;
        bp(r) += h;
        bm(r) -= h;
        double fd = (loss_at(weights, bp) - loss_at(weights, bm)) / (2 * h);
        CHECK(std::abs(grad_b(r) - fd) / std::max({1.0, std::abs(grad_b(r)), std::abs(fd)}) <
              1e-5);
    }
}

TEST_CASE("logistic training loss is non-increasing under the default rate") {
    Matrix X = separable_features();
    LinearModel model;
    model.weights = Matrix::Zero(2, 2);
    model.bias = Vector::Zero(2);
    LinearHyper hyper;
    Matrix gw;
    Vector gb;
    double prev = 1e300;
    for (int epoch = 0; epoch < 100; ++epoch) {
        double loss = logistic_loss_and_grad(model.weights, model.bias, X, kSeparableLabels,
                                             hyper.l2_strength, gw, gb);
        CHECK(loss <= prev + 1e-12);
        prev = loss;
        model.weights -= hyper.learning_rate * gw;
        model.bias -= hyper.learning_rate * gb;
    }
}

TEST_CASE("svm reaches non-negative margins on the separable toy set") {
    LinearModel model = train_linear_svm(separable_features(), kSeparableLabels, 2);
    Matrix X = separable_features();
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        Vector scores = class_scores(model, X.row(i).transpose());
        CHECK(scores(kSeparableLabels[static_cast<std::size_t>(i)]) >= 0.0);
    }
    CHECK(accuracy_count(model, X, kSeparableLabels) == 4);
}

TEST_CASE("svm predictions agree between duplicated and deduplicated training sets") {
    Matrix X = separable_features();
    Matrix X2(8, 2);
    X2 << X, X;
    std::vector<int> labels2 = {0, 0, 1, 1, 0, 0, 1, 1};
    LinearModel a = train_linear_svm(X, kSeparableLabels, 2);
    LinearModel b = train_linear_svm(X2, labels2, 2);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        CHECK(predict_class(a, X.row(i).transpose()) == predict_class(b, X.row(i).transpose()));
}

TEST_CASE("zero-epoch svm breaks score ties to the lowest class index") {
    LinearHyper hyper;
    hyper.epochs = 0;
    LinearModel model = train_linear_svm(separable_features(), kSeparableLabels, 2, hyper);
    CHECK(predict_class(model, separable_features().row(0).transpose()) == 0);
}

TEST_CASE("feature length mismatch raises a dimension error") {
    LinearModel model = train_logistic(separable_features(), kSeparableLabels, 2);
    CHECK_THROWS_AS(predict_class(model, Vector::Zero(3)), DimensionError);
}

TEST_CASE("appending all-zero feature columns leaves predictions unchanged") {
    Matrix X = separable_features();
    Matrix padded(4, 4);
    padded << X, Matrix::Zero(4, 2);
    for (bool svm : {false, true}) {
        LinearModel base = svm ? train_linear_svm(X, kSeparableLabels, 2)
                               : train_logistic(X, kSeparableLabels, 2);
        LinearModel wide = svm ? train_linear_svm(padded, kSeparableLabels, 2)
                               : train_logistic(padded, kSeparableLabels, 2);
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            CHECK(predict_class(base, X.row(i).transpose()) ==
                  predict_class(wide, padded.row(i).transpose()));
        }
    }
}

TEST_CASE("linear models round-trip through save/load") {
    LinearModel model = train_logistic(separable_features(), kSeparableLabels, 2);
    std::string path = (std::filesystem::temp_directory_path() / "adme_linear.txt").string();
    save_linear(model, path);
    LinearModel loaded = load_linear(path);
    CHECK(loaded.kind == model.kind);
    CHECK((loaded.weights - model.weights).norm() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK((loaded.bias - model.bias).norm() == doctest::Approx(0.0).epsilon(1e-15));
    std::remove(path.c_str());
}

}  // TEST_SUITE
