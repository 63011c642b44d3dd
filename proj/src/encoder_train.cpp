#include "adme/encoder_train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "adme/error.hpp"
#include "adme/eval.hpp"

namespace adme {

using nlohmann::json;

namespace {

void zero_all(std::vector<TensorRef>& tensors) {
    for (TensorRef& t : tensors) std::fill(t.data, t.data + t.size(), 0.0);
}

// dy -> dx for y = gain .* x_hat + bias applied row-wise.
void layer_norm_backward(const Matrix& dy, const Matrix& x_hat, const Vector& rstd,
                         const Vector& gain, Vector& dgain, Vector& dbias, Matrix& dx) {
    const Eigen::Index rows = dy.rows();
    const Eigen::Index cols = dy.cols();
    dx.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        dgain += dy.row(r).cwiseProduct(x_hat.row(r)).transpose();
        dbias += dy.row(r).transpose();
        Eigen::RowVectorXd dxhat = dy.row(r).cwiseProduct(gain.transpose());
        double mean_dxhat = dxhat.mean();
        double mean_dxhat_xhat = dxhat.cwiseProduct(x_hat.row(r)).mean();
        dx.row(r) =
            rstd(r) * (dxhat.array() - mean_dxhat - x_hat.row(r).array() * mean_dxhat_xhat);
    }
}

Vector softmax_vector(const Vector& logits) {
    Vector shifted = logits.array() - logits.maxCoeff();
    Vector e = shifted.array().exp();
    return e / e.sum();
}

}  // namespace

double cls_head_backward(const EncoderParams& params, const ForwardCache& cache, int label,
                         double loss_scale, EncoderParams& grads, Matrix& d_final) {
    if (label < 0 || label >= kNumTopics) throw TrainError("cls_head_backward: bad label");
    Vector hidden = cache.final_hidden().row(0).transpose();
    Vector logits = params.cls_weight * hidden + params.cls_bias;
    Vector probs = softmax_vector(logits);
    double loss = -std::log(std::max(probs(label), 1e-300));

    Vector dlogits = probs * loss_scale;
    dlogits(label) -= loss_scale;
    grads.cls_weight.noalias() += dlogits * hidden.transpose();
    grads.cls_bias += dlogits;
    d_final.row(0) += (params.cls_weight.transpose() * dlogits).transpose();
    return loss * loss_scale;
}

double mlm_head_backward(const EncoderParams& params, const ForwardCache& cache,
                         const std::vector<MlmTarget>& targets, double loss_scale,
                         EncoderParams& grads, Matrix& d_final) {
    const double eps = params.config.layer_norm_eps;
    double loss = 0.0;
    for (const MlmTarget& target : targets) {
        const int pos = target.position;
        if (pos < 0 || pos >= cache.seq_len) throw TrainError("mlm_head_backward: bad position");
        Eigen::RowVectorXd hidden = cache.final_hidden().row(pos);
        Eigen::RowVectorXd pre = hidden * params.mlm_dense + params.mlm_dense_bias.transpose();
        Eigen::RowVectorXd act = pre.unaryExpr([](double v) { return gelu(v); });

        double mean = act.mean();
        double var = (act.array() - mean).square().mean();
        double rstd = 1.0 / std::sqrt(var + eps);
        Eigen::RowVectorXd hat = (act.array() - mean) * rstd;
        Eigen::RowVectorXd normed =
            hat.cwiseProduct(params.mlm_ln_gain.transpose()) + params.mlm_ln_bias.transpose();

        Vector logits = params.token_embedding * normed.transpose() + params.mlm_out_bias;
        Vector probs = softmax_vector(logits);
        loss += -std::log(std::max(probs(target.target_id), 1e-300)) * loss_scale;

        Vector dlogits = probs * loss_scale;
        dlogits(target.target_id) -= loss_scale;
        grads.token_embedding.noalias() += dlogits * normed;
        grads.mlm_out_bias += dlogits;
        Eigen::RowVectorXd dnormed = (params.token_embedding.transpose() * dlogits).transpose();

        grads.mlm_ln_gain += dnormed.cwiseProduct(hat).transpose();
        grads.mlm_ln_bias += dnormed.transpose();
        Eigen::RowVectorXd dhat = dnormed.cwiseProduct(params.mlm_ln_gain.transpose());
        double mean_dhat = dhat.mean();
        double mean_dhat_hat = dhat.cwiseProduct(hat).mean();
        Eigen::RowVectorXd dact =
            rstd * (dhat.array() - mean_dhat - hat.array() * mean_dhat_hat);

        Eigen::RowVectorXd dpre =
            dact.cwiseProduct(pre.unaryExpr([](double v) { return gelu_derivative(v); }));
        grads.mlm_dense.noalias() += hidden.transpose() * dpre;
        grads.mlm_dense_bias += dpre.transpose();
        d_final.row(pos) += dpre * params.mlm_dense.transpose();
    }
    return loss;
}

void encoder_backward(const EncoderParams& params, const ForwardCache& cache,
                      const Matrix& d_final, EncoderParams& grads) {
    const EncoderConfig& config = params.config;
    const int heads = config.num_heads;
    const int dk = config.head_dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
    const int T = cache.seq_len;
    const bool use_dropout = cache.training && config.dropout_rate > 0.0;

    Matrix d = d_final;
    for (int l = config.num_layers - 1; l >= 0; --l) {
        const LayerParams& layer = params.layers[static_cast<std::size_t>(l)];
        LayerParams& g = grads.layers[static_cast<std::size_t>(l)];
        const ForwardCache::LayerCache& lc = cache.layers[static_cast<std::size_t>(l)];

        Matrix dresid2;
        layer_norm_backward(d, lc.x2_hat, lc.ln2_rstd, layer.ln2_gain, g.ln2_gain, g.ln2_bias,
                            dresid2);
        Matrix dx1 = dresid2;
        Matrix dffn = use_dropout ? dresid2.cwiseProduct(lc.ffn_dropout).eval() : dresid2;

        g.ffn_out.noalias() += lc.ffn_act.transpose() * dffn;
        g.ffn_out_bias += dffn.colwise().sum().transpose();
        Matrix dact = dffn * layer.ffn_out.transpose();
        Matrix dpre =
            dact.cwiseProduct(lc.ffn_pre.unaryExpr([](double v) { return gelu_derivative(v); }));
        g.ffn_in.noalias() += lc.x1.transpose() * dpre;
        g.ffn_in_bias += dpre.colwise().sum().transpose();
        dx1.noalias() += dpre * layer.ffn_in.transpose();

        Matrix dresid1;
        layer_norm_backward(dx1, lc.x1_hat, lc.ln1_rstd, layer.ln1_gain, g.ln1_gain, g.ln1_bias,
                            dresid1);
        Matrix dinput = dresid1;
        Matrix dattn = use_dropout ? dresid1.cwiseProduct(lc.attn_dropout).eval() : dresid1;

        g.wo.noalias() += lc.context.transpose() * dattn;
        g.bo += dattn.colwise().sum().transpose();
        Matrix dcontext = dattn * layer.wo.transpose();

        Matrix dq = Matrix::Zero(T, config.hidden_size);
        Matrix dkm = Matrix::Zero(T, config.hidden_size);
        Matrix dv = Matrix::Zero(T, config.hidden_size);
        for (int h = 0; h < heads; ++h) {
            const Matrix& probs = lc.probs[static_cast<std::size_t>(h)];
            auto dctx_h = dcontext.middleCols(h * dk, dk);
            auto vh = lc.v.middleCols(h * dk, dk);
            auto qh = lc.q.middleCols(h * dk, dk);
            auto kh = lc.k.middleCols(h * dk, dk);

            Matrix dprobs = dctx_h * vh.transpose();
            dv.middleCols(h * dk, dk).noalias() += probs.transpose() * dctx_h;

            Matrix dscores(T, T);
            for (Eigen::Index r = 0; r < T; ++r) {
                double dot = dprobs.row(r).dot(probs.row(r));
                dscores.row(r) = (probs.row(r).array() * (dprobs.row(r).array() - dot)).matrix();
            }
            dq.middleCols(h * dk, dk).noalias() += dscores * kh * scale;
            dkm.middleCols(h * dk, dk).noalias() += dscores.transpose() * qh * scale;
        }

        g.wq.noalias() += lc.input.transpose() * dq;
        g.bq += dq.colwise().sum().transpose();
        dinput.noalias() += dq * layer.wq.transpose();
        g.wk.noalias() += lc.input.transpose() * dkm;
        g.bk += dkm.colwise().sum().transpose();
        dinput.noalias() += dkm * layer.wk.transpose();
        g.wv.noalias() += lc.input.transpose() * dv;
        g.bv += dv.colwise().sum().transpose();
        dinput.noalias() += dv * layer.wv.transpose();

        d = std::move(dinput);
    }

    Matrix dnormed = use_dropout ? d.cwiseProduct(cache.emb_dropout).eval() : d;
    Matrix dembedded;
    layer_norm_backward(dnormed, cache.emb_hat, cache.emb_rstd, params.emb_ln_gain,
                        grads.emb_ln_gain, grads.emb_ln_bias, dembedded);
    for (int t = 0; t < T; ++t) {
        grads.token_embedding.row(cache.ids[static_cast<std::size_t>(t)]) += dembedded.row(t);
        grads.position_embedding.row(t) += dembedded.row(t);
        grads.segment_embedding.row(0) += dembedded.row(t);
    }
}

AdamW::AdamW(const EncoderParams& shape, double beta1, double beta2, double eps,
             double weight_decay)
    : m_(zeros_like(shape)),
      v_(zeros_like(shape)),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps),
      weight_decay_(weight_decay) {}

void AdamW::step(EncoderParams& params, EncoderParams& grads, double lr) {
    ++step_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));

    std::vector<TensorRef> p = collect_tensors(params);
    std::vector<TensorRef> g = collect_tensors(grads);
    std::vector<TensorRef> m = collect_tensors(m_);
    std::vector<TensorRef> v = collect_tensors(v_);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (params.group_frozen(p[i].group)) continue;
        const bool decay = p[i].kind == TensorKind::Weight && p[i].cols > 1;
        const Eigen::Index n = p[i].size();
        double* pd = p[i].data;
        double* gd = g[i].data;
        double* md = m[i].data;
        double* vd = v[i].data;
        for (Eigen::Index j = 0; j < n; ++j) {
            md[j] = beta1_ * md[j] + (1.0 - beta1_) * gd[j];
            vd[j] = beta2_ * vd[j] + (1.0 - beta2_) * gd[j] * gd[j];
            double update = (md[j] / bc1) / (std::sqrt(vd[j] / bc2) + eps_);
            if (decay) update += weight_decay_ * pd[j];
            pd[j] -= lr * update;
        }
    }
}

double LrSchedule::at(long step) const {
    const long warmup = std::max<long>(1, static_cast<long>(
                                              std::llround(warmup_fraction *
                                                           static_cast<double>(total_steps))));
    if (step <= warmup) return peak * static_cast<double>(step) / static_cast<double>(warmup);
    if (total_steps <= warmup) return peak;
    double remaining = static_cast<double>(total_steps - step) /
                       static_cast<double>(total_steps - warmup);
    return peak * std::max(0.0, remaining);
}

namespace {

struct BatchSlots {
    std::vector<EncoderParams> grads;
    std::vector<std::vector<TensorRef>> grad_refs;
    std::vector<ForwardCache> caches;

    BatchSlots(const EncoderParams& shape, int count) {
        grads.reserve(static_cast<std::size_t>(count));
        caches.resize(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) grads.push_back(zeros_like(shape));
        for (EncoderParams& g : grads) grad_refs.push_back(collect_tensors(g));
    }
};

// Sums slot gradients into `total` in slot order, which keeps training
// deterministic regardless of how many threads ran the slots.
void merge_slots(BatchSlots& slots, int used, std::vector<TensorRef>& total) {
    for (int s = 0; s < used; ++s) {
        std::vector<TensorRef>& refs = slots.grad_refs[static_cast<std::size_t>(s)];
        for (std::size_t i = 0; i < refs.size(); ++i) {
            const Eigen::Index n = refs[i].size();
            double* src = refs[i].data;
            double* dst = total[i].data;
            for (Eigen::Index j = 0; j < n; ++j) dst[j] += src[j];
        }
    }
}

struct MetricsLog {
    std::ofstream out;
    explicit MetricsLog(const std::string& path) {
        if (!path.empty()) {
            out.open(path, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError("cannot write metrics log: " + path);
        }
    }
    void record(long step, double loss, double lr, const char* split) {
        if (!out.is_open()) return;
        out << json{{"step", step}, {"loss", loss}, {"lr", lr}, {"split", split}}.dump() << '\n';
    }
};

int batch_seq_len(const std::vector<Encoding>& encodings, const std::vector<std::size_t>& order,
                  std::size_t begin, std::size_t end) {
    int seq_len = 2;
    for (std::size_t i = begin; i < end; ++i)
        seq_len = std::max(seq_len, encodings[order[i]].num_real);
    return seq_len;
}

}  // namespace

PretrainResult pretrain_mlm(EncoderParams& params, const SubwordVocab& vocab,
                            const std::vector<std::string>& corpus,
                            const PretrainConfig& config) {
    if (corpus.empty()) throw TrainError("pretrain_mlm: empty corpus");
    if (config.mask_fraction <= 0.0 || config.mask_fraction > 1.0)
        throw ConfigError("pretrain_mlm: mask_fraction must be in (0, 1]");
    if (config.batch_size < 1) throw ConfigError("pretrain_mlm: batch_size must be >= 1");
    if (config.epochs < 1) throw ConfigError("pretrain_mlm: epochs must be >= 1");
    if (vocab.size() != params.config.vocab_size)
        throw ConfigError("pretrain_mlm: vocab size does not match encoder config");

    std::vector<Encoding> encodings;
    encodings.reserve(corpus.size());
    for (const std::string& text : corpus)
        encodings.push_back(encode(vocab, text, params.config.max_seq_len));

    const std::size_t n = encodings.size();
    const long steps_per_epoch =
        static_cast<long>((n + static_cast<std::size_t>(config.batch_size) - 1) /
                          static_cast<std::size_t>(config.batch_size));
    LrSchedule schedule{config.learning_rate, steps_per_epoch * config.epochs,
                        config.warmup_fraction};
    AdamW optimizer(params);
    MetricsLog log(config.metrics_log);

    BatchSlots slots(params, config.batch_size);
    EncoderParams total_grads = zeros_like(params);
    std::vector<TensorRef> total_refs = collect_tensors(total_grads);

    PretrainResult result;
    long global_step = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        SplitMix64 shuffle_rng(derive_seed(config.seed, 0xE90C0ULL + static_cast<std::uint64_t>(epoch)));
        shuffle(order, shuffle_rng);

        double epoch_loss = 0.0;
        long epoch_batches = 0;
        for (std::size_t begin = 0; begin < n; begin += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end = std::min(n, begin + static_cast<std::size_t>(config.batch_size));
            const int used = static_cast<int>(end - begin);
            const int seq_len = batch_seq_len(encodings, order, begin, end);

            // Draw masking plans first so the batch loss can be normalized by
            // the total number of prediction targets.
            std::vector<std::vector<MlmTarget>> targets(static_cast<std::size_t>(used));
            std::vector<std::vector<int>> masked_ids(static_cast<std::size_t>(used));
            std::vector<SplitMix64> rngs;
            rngs.reserve(static_cast<std::size_t>(used));
            long total_targets = 0;
            for (int s = 0; s < used; ++s) {
                const Encoding& enc = encodings[order[begin + static_cast<std::size_t>(s)]];
                rngs.emplace_back(derive_seed(
                    derive_seed(config.seed, 0x3A5ULL + static_cast<std::uint64_t>(epoch)),
                    static_cast<std::uint64_t>(order[begin + static_cast<std::size_t>(s)])));
                SplitMix64& rng = rngs.back();
                std::vector<int> ids = enc.ids;
                std::vector<int> candidates;
                for (int t = 1; t + 1 < enc.num_real; ++t) candidates.push_back(t);
                std::vector<int> selected;
                for (int t : candidates)
                    if (rng.uniform() < config.mask_fraction) selected.push_back(t);
                if (selected.empty() && !candidates.empty())
                    selected.push_back(candidates[rng.uniform_int(candidates.size())]);
                for (int t : selected) {
                    MlmTarget target{t, ids[static_cast<std::size_t>(t)]};
                    double r = rng.uniform();
                    if (r < 0.8) {
                        ids[static_cast<std::size_t>(t)] = SubwordVocab::kMask;
                    } else if (r < 0.9) {
                        ids[static_cast<std::size_t>(t)] = static_cast<int>(
                            SubwordVocab::kNumSpecials +
                            rng.uniform_int(static_cast<std::uint64_t>(
                                params.config.vocab_size - SubwordVocab::kNumSpecials)));
                    }
                    targets[static_cast<std::size_t>(s)].push_back(target);
                }
                masked_ids[static_cast<std::size_t>(s)] = std::move(ids);
                total_targets += static_cast<long>(targets[static_cast<std::size_t>(s)].size());
            }
            if (total_targets == 0) continue;

            const double loss_scale = 1.0 / static_cast<double>(total_targets);
            std::vector<double> slot_loss(static_cast<std::size_t>(used), 0.0);
#pragma omp parallel for schedule(static)
            for (int s = 0; s < used; ++s) {
                const Encoding& enc = encodings[order[begin + static_cast<std::size_t>(s)]];
                EncoderParams& g = slots.grads[static_cast<std::size_t>(s)];
                zero_all(slots.grad_refs[static_cast<std::size_t>(s)]);
                ForwardCache& cache = slots.caches[static_cast<std::size_t>(s)];
                encoder_forward(params, masked_ids[static_cast<std::size_t>(s)],
                                enc.attention_mask, seq_len, true,
                                rngs[static_cast<std::size_t>(s)], cache);
                Matrix d_final = Matrix::Zero(seq_len, params.config.hidden_size);
                slot_loss[static_cast<std::size_t>(s)] =
                    mlm_head_backward(params, cache, targets[static_cast<std::size_t>(s)],
                                      loss_scale, g, d_final);
                encoder_backward(params, cache, d_final, g);
            }

            zero_all(total_refs);
            merge_slots(slots, used, total_refs);
            ++global_step;
            const double lr = schedule.at(global_step);
            optimizer.step(params, total_grads, lr);

            double batch_loss = 0.0;
            for (double l : slot_loss) batch_loss += l;
            epoch_loss += batch_loss;
            ++epoch_batches;
            log.record(global_step, batch_loss, lr, "pretrain");
        }
        result.loss_history.push_back(epoch_batches > 0 ? epoch_loss / static_cast<double>(epoch_batches)
                                                        : 0.0);
    }
    return result;
}

FinetuneResult finetune(EncoderParams& params, const SubwordVocab& vocab,
                        const std::vector<LabeledParagraph>& train,
                        const std::vector<LabeledParagraph>& val, const FinetuneConfig& config) {
    if (train.empty()) throw TrainError("finetune: empty training set");
    if (config.batch_size < 1) throw ConfigError("finetune: batch_size must be >= 1");
    if (config.epochs < 1) throw ConfigError("finetune: epochs must be >= 1");
    if (vocab.size() != params.config.vocab_size)
        throw ConfigError("finetune: vocab size does not match encoder config");

    if (config.freeze_top_n) {
        freeze_bottom_layers(params, *config.freeze_top_n);  // throws when n > L
    } else {
        unfreeze_all(params);
    }

    std::vector<Encoding> encodings;
    std::vector<int> labels;
    encodings.reserve(train.size());
    for (const LabeledParagraph& p : train) {
        encodings.push_back(encode(vocab, p.text, params.config.max_seq_len));
        labels.push_back(topic_index(p.topic));
    }
    std::vector<Encoding> val_encodings;
    std::vector<Topic> val_golds;
    for (const LabeledParagraph& p : val) {
        val_encodings.push_back(encode(vocab, p.text, params.config.max_seq_len));
        val_golds.push_back(p.topic);
    }

    const std::size_t n = encodings.size();
    const long steps_per_epoch =
        static_cast<long>((n + static_cast<std::size_t>(config.batch_size) - 1) /
                          static_cast<std::size_t>(config.batch_size));
    LrSchedule schedule{config.learning_rate, steps_per_epoch * config.epochs,
                        config.warmup_fraction};
    AdamW optimizer(params);
    MetricsLog log(config.metrics_log);

    BatchSlots slots(params, config.batch_size);
    EncoderParams total_grads = zeros_like(params);
    std::vector<TensorRef> total_refs = collect_tensors(total_grads);

    FinetuneResult result;
    EncoderParams best_params = params;
    double best_f1 = -1.0;

    long global_step = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        SplitMix64 shuffle_rng(derive_seed(config.seed, 0xF1E7ULL + static_cast<std::uint64_t>(epoch)));
        shuffle(order, shuffle_rng);

        double epoch_loss = 0.0;
        long epoch_batches = 0;
        for (std::size_t begin = 0; begin < n; begin += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end = std::min(n, begin + static_cast<std::size_t>(config.batch_size));
            const int used = static_cast<int>(end - begin);
            const int seq_len = batch_seq_len(encodings, order, begin, end);
            const double loss_scale = 1.0 / static_cast<double>(used);

            std::vector<SplitMix64> rngs;
            rngs.reserve(static_cast<std::size_t>(used));
            for (int s = 0; s < used; ++s)
                rngs.emplace_back(derive_seed(
                    derive_seed(config.seed, 0xD0ULL + static_cast<std::uint64_t>(epoch)),
                    static_cast<std::uint64_t>(order[begin + static_cast<std::size_t>(s)])));

            std::vector<double> slot_loss(static_cast<std::size_t>(used), 0.0);
#pragma omp parallel for schedule(static)
            for (int s = 0; s < used; ++s) {
                const std::size_t idx = order[begin + static_cast<std::size_t>(s)];
                EncoderParams& g = slots.grads[static_cast<std::size_t>(s)];
                zero_all(slots.grad_refs[static_cast<std::size_t>(s)]);
                ForwardCache& cache = slots.caches[static_cast<std::size_t>(s)];
                encoder_forward(params, encodings[idx].ids, encodings[idx].attention_mask,
                                seq_len, true, rngs[static_cast<std::size_t>(s)], cache);
                Matrix d_final = Matrix::Zero(seq_len, params.config.hidden_size);
                slot_loss[static_cast<std::size_t>(s)] = cls_head_backward(
                    params, cache, labels[idx], loss_scale, g, d_final);
                encoder_backward(params, cache, d_final, g);
            }

            zero_all(total_refs);
            merge_slots(slots, used, total_refs);
            ++global_step;
            const double lr = schedule.at(global_step);
            optimizer.step(params, total_grads, lr);

            double batch_loss = 0.0;
            for (double l : slot_loss) batch_loss += l;
            epoch_loss += batch_loss;
            ++epoch_batches;
            log.record(global_step, batch_loss, lr, "train");
        }
        result.loss_history.push_back(
            epoch_batches > 0 ? epoch_loss / static_cast<double>(epoch_batches) : 0.0);

        if (!val_encodings.empty()) {
            std::vector<Topic> preds;
            preds.reserve(val_encodings.size());
            for (const Encoding& enc : val_encodings) {
                Vector logits = classify_logits(params, enc);
                int best = 0;
                for (int c = 1; c < logits.size(); ++c)
                    if (logits(c) > logits(best)) best = c;
                preds.push_back(topic_at(best));
            }
            double f1 = macro_metrics(preds, val_golds).f1;
            result.val_f1_history.push_back(f1);
            log.record(global_step, f1, schedule.at(global_step), "val");
            if (config.select_on_validation && f1 > best_f1) {
                best_f1 = f1;
                best_params = params;
                result.best_epoch = epoch;
            }
        }
    }

    if (config.select_on_validation && best_f1 >= 0.0) params = best_params;
    return result;
}

GridResult grid_search(const std::vector<int>& batch_sizes,
                       const std::vector<double>& learning_rates,
                       const std::function<double(int, double)>& evaluate) {
    if (batch_sizes.empty() || learning_rates.empty())
        throw ConfigError("grid_search: empty grid axis");
    GridResult result;
    bool first = true;
    for (int batch : batch_sizes) {
        for (double lr : learning_rates) {
            double score = evaluate(batch, lr);
            result.cells.push_back({batch, lr, score});
            bool better = first || score > result.best_score;
            if (!better && score == result.best_score) {
                if (batch > result.best_batch) better = true;
                else if (batch == result.best_batch && lr < result.best_lr) better = true;
            }
            if (better) {
                result.best_score = score;
                result.best_batch = batch;
                result.best_lr = lr;
                first = false;
            }
        }
    }
    return result;
}

}  // namespace adme
