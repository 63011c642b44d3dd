#include <doctest.h>

#include <cmath>

#include "adme/encoder.hpp"
#include "adme/encoder_train.hpp"

using namespace adme;

namespace {

EncoderConfig grad_config() {
    EncoderConfig config;
    config.num_layers = 2;
    config.num_heads = 2;
    config.hidden_size = 8;
    config.ffn_size = 32;
    config.max_seq_len = 6;
    config.vocab_size = 40;
    config.dropout_rate = 0.0;  // gradient checks run with dropout off
    return config;
}

const std::vector<int> kIds = {2, 7, 9, 21, 3, 0};
const std::vector<int> kMask = {1, 1, 1, 1, 1, 0};
constexpr int kSeqLen = 6;
constexpr int kLabel = 2;
const std::vector<MlmTarget> kMlmTargets = {{1, 12}, {3, 30}};

// Loss recomputed from scratch (forward only), used as the finite-difference
// oracle.
double cls_loss(const EncoderParams& params) {
    SplitMix64 rng(0);
    ForwardCache cache;
    encoder_forward(params, kIds, kMask, kSeqLen, false, rng, cache);
    Vector logits = params.cls_weight * cache.final_hidden().row(0).transpose() + params.cls_bias;
    Vector shifted = logits.array() - logits.maxCoeff();
    Vector e = shifted.array().exp();
    return -std::log(e(kLabel) / e.sum());
}

double mlm_loss(const EncoderParams& params) {
    SplitMix64 rng(0);
    ForwardCache cache;
    encoder_forward(params, kIds, kMask, kSeqLen, false, rng, cache);
    double loss = 0.0;
    const double scale = 1.0 / static_cast<double>(kMlmTargets.size());
    for (const MlmTarget& target : kMlmTargets) {
        Eigen::RowVectorXd h = cache.final_hidden().row(target.position);
        Eigen::RowVectorXd pre = h * params.mlm_dense + params.mlm_dense_bias.transpose();
        Eigen::RowVectorXd act = pre.unaryExpr([](double v) { return gelu(v); });
        double mean = act.mean();
        double var = (act.array() - mean).square().mean();
        double rstd = 1.0 / std::sqrt(var + params.config.layer_norm_eps);
        Eigen::RowVectorXd normed =
            (((act.array() - mean) * rstd).matrix().cwiseProduct(params.mlm_ln_gain.transpose())) +
            params.mlm_ln_bias.transpose();
        Vector logits = params.token_embedding * normed.transpose() + params.mlm_out_bias;
        Vector shifted = logits.array() - logits.maxCoeff();
        Vector e = shifted.array().exp();
        loss += -std::log(e(target.target_id) / e.sum()) * scale;
    }
    return loss;
}

struct GroupError {
    double analytic_sq = 0.0;
    double fd_sq = 0.0;
    double diff_sq = 0.0;
};

// Central finite differences over every scalar, aggregated per parameter
// group: rel = ||g_a - g_fd|| / max(||g_a||, ||g_fd||, tiny).
template <typename LossFn, typename BackwardFn>
std::vector<double> group_relative_errors(EncoderParams& params, LossFn&& loss,
                                          BackwardFn&& backward) {
    EncoderParams grads = zeros_like(params);
    backward(params, grads);

    std::vector<GroupError> groups(static_cast<std::size_t>(params.num_groups()));
    auto param_tensors = collect_tensors(params);
    auto grad_tensors = collect_tensors(grads);
    const double h = 1e-5;
    for (std::size_t t = 0; t < param_tensors.size(); ++t) {
        GroupError& ge = groups[static_cast<std::size_t>(param_tensors[t].group)];
        for (Eigen::Index j = 0; j < param_tensors[t].size(); ++j) {
            double saved = param_tensors[t].data[j];
            param_tensors[t].data[j] = saved + h;
            double up = loss(params);
            param_tensors[t].data[j] = saved - h;
            double down = loss(params);
            param_tensors[t].data[j] = saved;
            double fd = (up - down) / (2.0 * h);
            double analytic = grad_tensors[t].data[j];
            ge.analytic_sq += analytic * analytic;
            ge.fd_sq += fd * fd;
            ge.diff_sq += (analytic - fd) * (analytic - fd);
        }
    }
    std::vector<double> rel;
    for (const GroupError& ge : groups) {
        double denom = std::max({std::sqrt(ge.analytic_sq), std::sqrt(ge.fd_sq), 1e-8});
        rel.push_back(std::sqrt(ge.diff_sq) / denom);
    }
    return rel;
}

}  // namespace

TEST_SUITE("gradcheck") {

TEST_CASE("classification gradients match finite differences in every group") {
    EncoderParams params = init_params(grad_config(), InitScheme::TruncatedNormal, 77);
    auto rel = group_relative_errors(params, cls_loss, [](EncoderParams& p, EncoderParams& g) {
        SplitMix64 rng(0);
        ForwardCache cache;
        encoder_forward(p, kIds, kMask, kSeqLen, false, rng, cache);
        Matrix d_final = Matrix::Zero(kSeqLen, p.config.hidden_size);
        cls_head_backward(p, cache, kLabel, 1.0, g, d_final);
        encoder_backward(p, cache, d_final, g);
    });
    for (std::size_t g = 0; g < rel.size(); ++g) {
        INFO("group ", g);
        // The MLM head takes no gradient from the classification loss; both
        // sides are zero there.
        CHECK(rel[g] < 1e-4);
    }
}

TEST_CASE("masked-LM gradients match finite differences in every group") {
    EncoderParams params = init_params(grad_config(), InitScheme::TruncatedNormal, 78);
    auto rel = group_relative_errors(params, mlm_loss, [](EncoderParams& p, EncoderParams& g) {
        SplitMix64 rng(0);
        ForwardCache cache;
        encoder_forward(p, kIds, kMask, kSeqLen, false, rng, cache);
        Matrix d_final = Matrix::Zero(kSeqLen, p.config.hidden_size);
        mlm_head_backward(p, cache, kMlmTargets, 1.0 / static_cast<double>(kMlmTargets.size()),
                          g, d_final);
        encoder_backward(p, cache, d_final, g);
    });
    for (std::size_t g = 0; g + 1 < rel.size(); ++g) {  // classifier head unused by MLM loss
        INFO("group ", g);
        CHECK(rel[g] < 1e-4);
    }
}

TEST_CASE("uniform-initialized parameters pass the same check") {
    EncoderParams params = init_params(grad_config(), InitScheme::Uniform, 79);
    auto rel = group_relative_errors(params, cls_loss, [](EncoderParams& p, EncoderParams& g) {
        SplitMix64 rng(0);
        ForwardCache cache;
        encoder_forward(p, kIds, kMask, kSeqLen, false, rng, cache);
        Matrix d_final = Matrix::Zero(kSeqLen, p.config.hidden_size);
        cls_head_backward(p, cache, kLabel, 1.0, g, d_final);
        encoder_backward(p, cache, d_final, g);
    });
    for (std::size_t g = 0; g < rel.size(); ++g) {
        INFO("group ", g);
        CHECK(rel[g] < 1e-4);
    }
}

}  // TEST_SUITE
