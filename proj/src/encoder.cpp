#include "adme/encoder.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "adme/error.hpp"

namespace adme {

using nlohmann::json;

void EncoderConfig::validate() const {
    if (num_layers < 1) throw ConfigError("encoder: num_layers must be >= 1");
    if (num_heads < 1) throw ConfigError("encoder: num_heads must be >= 1");
    if (hidden_size % num_heads != 0)
        throw ConfigError("encoder: hidden_size must be divisible by num_heads");
    if (ffn_size < 1) throw ConfigError("encoder: ffn_size must be >= 1");
    if (max_seq_len < 2) throw ConfigError("encoder: max_seq_len must be >= 2");
    if (vocab_size < SubwordVocab::kNumSpecials)
        throw ConfigError("encoder: vocab_size must cover the special tokens");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0)
        throw ConfigError("encoder: dropout_rate must be in [0, 1)");
}

namespace {

EncoderParams allocate_params(const EncoderConfig& config) {
    config.validate();
    const int d = config.hidden_size;
    EncoderParams p;
    p.config = config;
    p.token_embedding = Matrix::Zero(config.vocab_size, d);
    p.position_embedding = Matrix::Zero(config.max_seq_len, d);
    p.segment_embedding = Matrix::Zero(2, d);
    p.emb_ln_gain = Vector::Zero(d);
    p.emb_ln_bias = Vector::Zero(d);
    p.layers.resize(static_cast<std::size_t>(config.num_layers));
    for (LayerParams& layer : p.layers) {
        layer.wq = Matrix::Zero(d, d);
        layer.wk = Matrix::Zero(d, d);
        layer.wv = Matrix::Zero(d, d);
        layer.wo = Matrix::Zero(d, d);
        layer.bq = Vector::Zero(d);
        layer.bk = Vector::Zero(d);
        layer.bv = Vector::Zero(d);
        layer.bo = Vector::Zero(d);
        layer.ffn_in = Matrix::Zero(d, config.ffn_size);
        layer.ffn_in_bias = Vector::Zero(config.ffn_size);
        layer.ffn_out = Matrix::Zero(config.ffn_size, d);
        layer.ffn_out_bias = Vector::Zero(d);
        layer.ln1_gain = Vector::Zero(d);
        layer.ln1_bias = Vector::Zero(d);
        layer.ln2_gain = Vector::Zero(d);
        layer.ln2_bias = Vector::Zero(d);
    }
    p.mlm_dense = Matrix::Zero(d, d);
    p.mlm_dense_bias = Vector::Zero(d);
    p.mlm_ln_gain = Vector::Zero(d);
    p.mlm_ln_bias = Vector::Zero(d);
    p.mlm_out_bias = Vector::Zero(config.vocab_size);
    p.cls_weight = Matrix::Zero(kNumTopics, d);
    p.cls_bias = Vector::Zero(kNumTopics);
    p.frozen.assign(static_cast<std::size_t>(p.num_groups()), 0);
    return p;
}

void push_matrix(std::vector<TensorRef>& out, const std::string& name, int group, TensorKind kind,
                 Matrix& m) {
    out.push_back({name, group, kind, m.data(), m.rows(), m.cols()});
}

void push_vector(std::vector<TensorRef>& out, const std::string& name, int group, TensorKind kind,
                 Vector& v) {
    out.push_back({name, group, kind, v.data(), v.size(), 1});
}

}  // namespace

std::vector<TensorRef> collect_tensors(EncoderParams& p) {
    std::vector<TensorRef> out;
    push_matrix(out, "embedding.token", 0, TensorKind::Weight, p.token_embedding);
    push_matrix(out, "embedding.position", 0, TensorKind::Weight, p.position_embedding);
    push_matrix(out, "embedding.segment", 0, TensorKind::Weight, p.segment_embedding);
    push_vector(out, "embedding.ln_gain", 0, TensorKind::LnGain, p.emb_ln_gain);
    push_vector(out, "embedding.ln_bias", 0, TensorKind::LnBias, p.emb_ln_bias);
    for (std::size_t i = 0; i < p.layers.size(); ++i) {
        LayerParams& layer = p.layers[i];
        const std::string prefix = "layer" + std::to_string(i) + ".";
        const int group = static_cast<int>(i) + 1;
        push_matrix(out, prefix + "wq", group, TensorKind::Weight, layer.wq);
        push_vector(out, prefix + "bq", group, TensorKind::Weight, layer.bq);
        push_matrix(out, prefix + "wk", group, TensorKind::Weight, layer.wk);
        push_vector(out, prefix + "bk", group, TensorKind::Weight, layer.bk);
        push_matrix(out, prefix + "wv", group, TensorKind::Weight, layer.wv);
        push_vector(out, prefix + "bv", group, TensorKind::Weight, layer.bv);
        push_matrix(out, prefix + "wo", group, TensorKind::Weight, layer.wo);
        push_vector(out, prefix + "bo", group, TensorKind::Weight, layer.bo);
        push_matrix(out, prefix + "ffn_in", group, TensorKind::Weight, layer.ffn_in);
        push_vector(out, prefix + "ffn_in_bias", group, TensorKind::Weight, layer.ffn_in_bias);
        push_matrix(out, prefix + "ffn_out", group, TensorKind::Weight, layer.ffn_out);
        push_vector(out, prefix + "ffn_out_bias", group, TensorKind::Weight, layer.ffn_out_bias);
        push_vector(out, prefix + "ln1_gain", group, TensorKind::LnGain, layer.ln1_gain);
        push_vector(out, prefix + "ln1_bias", group, TensorKind::LnBias, layer.ln1_bias);
        push_vector(out, prefix + "ln2_gain", group, TensorKind::LnGain, layer.ln2_gain);
        push_vector(out, prefix + "ln2_bias", group, TensorKind::LnBias, layer.ln2_bias);
    }
    const int mlm = p.mlm_group();
    push_matrix(out, "mlm.dense", mlm, TensorKind::Weight, p.mlm_dense);
    push_vector(out, "mlm.dense_bias", mlm, TensorKind::Weight, p.mlm_dense_bias);
    push_vector(out, "mlm.ln_gain", mlm, TensorKind::LnGain, p.mlm_ln_gain);
    push_vector(out, "mlm.ln_bias", mlm, TensorKind::LnBias, p.mlm_ln_bias);
    push_vector(out, "mlm.out_bias", mlm, TensorKind::Weight, p.mlm_out_bias);
    const int cls = p.classifier_group();
    push_matrix(out, "classifier.weight", cls, TensorKind::Weight, p.cls_weight);
    push_vector(out, "classifier.bias", cls, TensorKind::Weight, p.cls_bias);
    return out;
}

EncoderParams zeros_like(const EncoderParams& params) { return allocate_params(params.config); }

std::optional<InitScheme> init_scheme_from_string(std::string_view name) {
    if (name == "truncated_normal") return InitScheme::TruncatedNormal;
    if (name == "uniform") return InitScheme::Uniform;
    return std::nullopt;
}

const char* to_string(InitScheme scheme) {
    return scheme == InitScheme::TruncatedNormal ? "truncated_normal" : "uniform";
}

namespace {

void fill_tensor(const TensorRef& tensor, InitScheme scheme, SplitMix64& rng) {
    double* data = tensor.data;
    const Eigen::Index n = tensor.size();
    switch (tensor.kind) {
        case TensorKind::LnGain:
            for (Eigen::Index i = 0; i < n; ++i) data[i] = 1.0;
            return;
        case TensorKind::LnBias:
            for (Eigen::Index i = 0; i < n; ++i) data[i] = 0.0;
            return;
        case TensorKind::Weight:
            if (scheme == InitScheme::TruncatedNormal) {
                for (Eigen::Index i = 0; i < n; ++i) data[i] = rng.truncated_normal(0.02, 0.04);
            } else {
                for (Eigen::Index i = 0; i < n; ++i) data[i] = rng.uniform(-0.1, 0.1);
            }
            return;
    }
}

}  // namespace

EncoderParams init_params(const EncoderConfig& config, InitScheme scheme, std::uint64_t seed) {
    EncoderParams params = allocate_params(config);
    SplitMix64 rng(seed);
    for (const TensorRef& tensor : collect_tensors(params)) fill_tensor(tensor, scheme, rng);
    return params;
}

EncoderParams reinit_top_layers(const EncoderParams& params, int n, InitScheme scheme,
                                std::uint64_t seed) {
    const int num_layers = params.config.num_layers;
    if (n < 0 || n > num_layers)
        throw ConfigError("reinit_top_layers: n must be in [0, " + std::to_string(num_layers) +
                          "], got " + std::to_string(n));
    EncoderParams out = params;
    SplitMix64 rng(seed);
    const int first_group = 1 + num_layers - n;
    for (const TensorRef& tensor : collect_tensors(out)) {
        bool reinit_layer = tensor.group >= first_group && tensor.group <= num_layers;
        bool reinit_head = tensor.group == out.classifier_group();
        if (reinit_layer || reinit_head) fill_tensor(tensor, scheme, rng);
    }
    return out;
}

void freeze_all_but_head(EncoderParams& params) {
    std::fill(params.frozen.begin(), params.frozen.end(), char{1});
    params.frozen[static_cast<std::size_t>(params.classifier_group())] = 0;
}

void freeze_bottom_layers(EncoderParams& params, int top_n) {
    const int num_layers = params.config.num_layers;
    if (top_n < 0 || top_n > num_layers)
        throw ConfigError("freeze_bottom_layers: top_n must be in [0, " +
                          std::to_string(num_layers) + "], got " + std::to_string(top_n));
    freeze_all_but_head(params);
    for (int layer = num_layers - top_n; layer < num_layers; ++layer)
        params.frozen[static_cast<std::size_t>(layer + 1)] = 0;
}

void unfreeze_all(EncoderParams& params) {
    std::fill(params.frozen.begin(), params.frozen.end(), char{0});
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix out(logits.rows(), logits.cols());
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
        double max = logits.row(r).maxCoeff();
        Eigen::ArrayXd e = (logits.row(r).array() - max).exp();
        out.row(r) = e / e.sum();
    }
    return out;
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2)); }

double gelu_derivative(double x) {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779;
    return 0.5 * (1.0 + std::erf(x * M_SQRT1_2)) + x * inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

void scaled_dot_attention(const Matrix& queries, const Matrix& keys, const Matrix& values,
                          const std::vector<int>& key_mask, Matrix& context, Matrix& weights) {
    if (queries.cols() != keys.cols() || keys.rows() != values.rows())
        throw DimensionError("scaled_dot_attention: inconsistent shapes");
    if (static_cast<Eigen::Index>(key_mask.size()) != keys.rows())
        throw DimensionError("scaled_dot_attention: mask length mismatch");
    const double scale = 1.0 / std::sqrt(static_cast<double>(queries.cols()));
    Matrix logits = queries * keys.transpose() * scale;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
        if (!key_mask[static_cast<std::size_t>(j)]) logits.col(j).array() = -1e9;
    }
    weights = softmax_rows(logits);
    context = weights * values;
}

namespace {

void layer_norm_rows(const Matrix& x, const Vector& gain, const Vector& bias, double eps,
                     Matrix& normed, Matrix& x_hat, Vector& rstd) {
    const Eigen::Index rows = x.rows();
    normed.resize(rows, x.cols());
    x_hat.resize(rows, x.cols());
    rstd.resize(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        double mean = x.row(r).mean();
        double var = (x.row(r).array() - mean).square().mean();
        double rs = 1.0 / std::sqrt(var + eps);
        rstd(r) = rs;
        x_hat.row(r) = (x.row(r).array() - mean) * rs;
        normed.row(r) = x_hat.row(r).cwiseProduct(gain.transpose()) + bias.transpose();
    }
}

Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, SplitMix64& rng) {
    Matrix mask(rows, cols);
    const double keep_scale = 1.0 / (1.0 - rate);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            mask(r, c) = rng.uniform() < rate ? 0.0 : keep_scale;
    return mask;
}

}  // namespace

void encoder_forward(const EncoderParams& params, const std::vector<int>& ids,
                     const std::vector<int>& key_mask, int seq_len, bool training,
                     SplitMix64& rng, ForwardCache& cache) {
    const EncoderConfig& config = params.config;
    const int d = config.hidden_size;
    const int heads = config.num_heads;
    const int dk = config.head_dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
    if (seq_len < 1 || seq_len > config.max_seq_len)
        throw DimensionError("encoder_forward: seq_len out of range");
    if (static_cast<int>(ids.size()) < seq_len || static_cast<int>(key_mask.size()) < seq_len)
        throw DimensionError("encoder_forward: ids/mask shorter than seq_len");

    cache.seq_len = seq_len;
    cache.training = training;
    cache.ids.assign(ids.begin(), ids.begin() + seq_len);
    cache.key_mask.assign(key_mask.begin(), key_mask.begin() + seq_len);

    const bool use_dropout = training && config.dropout_rate > 0.0;

    cache.embedded.resize(seq_len, d);
    for (int t = 0; t < seq_len; ++t) {
        int id = cache.ids[static_cast<std::size_t>(t)];
        if (id < 0 || id >= config.vocab_size)
            throw DimensionError("encoder_forward: token id out of range");
        cache.embedded.row(t) = params.token_embedding.row(id) +
                                params.position_embedding.row(t) +
                                params.segment_embedding.row(0);
    }
    layer_norm_rows(cache.embedded, params.emb_ln_gain, params.emb_ln_bias,
                    config.layer_norm_eps, cache.emb_normed, cache.emb_hat, cache.emb_rstd);
    if (use_dropout) {
        cache.emb_dropout = dropout_mask(seq_len, d, config.dropout_rate, rng);
        cache.emb_normed = cache.emb_normed.cwiseProduct(cache.emb_dropout);
    } else {
        cache.emb_dropout.resize(0, 0);
    }

    cache.layers.assign(static_cast<std::size_t>(config.num_layers), ForwardCache::LayerCache{});
    const Matrix* x = &cache.emb_normed;
    for (int l = 0; l < config.num_layers; ++l) {
        const LayerParams& layer = params.layers[static_cast<std::size_t>(l)];
        ForwardCache::LayerCache& lc = cache.layers[static_cast<std::size_t>(l)];
        lc.input = *x;

        lc.q.noalias() = lc.input * layer.wq;
        lc.q.rowwise() += layer.bq.transpose();
        lc.k.noalias() = lc.input * layer.wk;
        lc.k.rowwise() += layer.bk.transpose();
        lc.v.noalias() = lc.input * layer.wv;
        lc.v.rowwise() += layer.bv.transpose();

        lc.probs.resize(static_cast<std::size_t>(heads));
        lc.context.resize(seq_len, d);
        for (int h = 0; h < heads; ++h) {
            auto qh = lc.q.middleCols(h * dk, dk);
            auto kh = lc.k.middleCols(h * dk, dk);
            auto vh = lc.v.middleCols(h * dk, dk);
            Matrix logits = qh * kh.transpose() * scale;
            for (int j = 0; j < seq_len; ++j) {
                if (!cache.key_mask[static_cast<std::size_t>(j)]) logits.col(j).array() = -1e9;
            }
            lc.probs[static_cast<std::size_t>(h)] = softmax_rows(logits);
            lc.context.middleCols(h * dk, dk).noalias() =
                lc.probs[static_cast<std::size_t>(h)] * vh;
        }

        lc.attn_out.noalias() = lc.context * layer.wo;
        lc.attn_out.rowwise() += layer.bo.transpose();
        if (use_dropout) {
            lc.attn_dropout = dropout_mask(seq_len, d, config.dropout_rate, rng);
            lc.attn_out = lc.attn_out.cwiseProduct(lc.attn_dropout);
        }
        lc.resid1 = lc.input + lc.attn_out;
        layer_norm_rows(lc.resid1, layer.ln1_gain, layer.ln1_bias, config.layer_norm_eps, lc.x1,
                        lc.x1_hat, lc.ln1_rstd);

        lc.ffn_pre.noalias() = lc.x1 * layer.ffn_in;
        lc.ffn_pre.rowwise() += layer.ffn_in_bias.transpose();
        lc.ffn_act = lc.ffn_pre.unaryExpr([](double v) { return gelu(v); });
        lc.ffn_out.noalias() = lc.ffn_act * layer.ffn_out;
        lc.ffn_out.rowwise() += layer.ffn_out_bias.transpose();
        if (use_dropout) {
            lc.ffn_dropout = dropout_mask(seq_len, d, config.dropout_rate, rng);
            lc.ffn_out = lc.ffn_out.cwiseProduct(lc.ffn_dropout);
        }
        lc.resid2 = lc.x1 + lc.ffn_out;
        layer_norm_rows(lc.resid2, layer.ln2_gain, layer.ln2_bias, config.layer_norm_eps, lc.x2,
                        lc.x2_hat, lc.ln2_rstd);
        x = &lc.x2;
    }
}

ForwardResult forward(const EncoderParams& params, const Encoding& encoding, bool capture,
                      bool with_mlm_logits) {
    const int seq_len = std::max(encoding.num_real, 2);
    ForwardCache cache;
    SplitMix64 rng(0);
    encoder_forward(params, encoding.ids, encoding.attention_mask, seq_len, false, rng, cache);

    ForwardResult result;
    result.cls_logits = params.cls_weight * cache.final_hidden().row(0).transpose() +
                        params.cls_bias;

    if (with_mlm_logits) {
        const Matrix& hidden = cache.final_hidden();
        Matrix dense = hidden * params.mlm_dense;
        dense.rowwise() += params.mlm_dense_bias.transpose();
        dense = dense.unaryExpr([](double v) { return gelu(v); });
        Matrix normed, hat;
        Vector rstd;
        layer_norm_rows(dense, params.mlm_ln_gain, params.mlm_ln_bias,
                        params.config.layer_norm_eps, normed, hat, rstd);
        Matrix logits = normed * params.token_embedding.transpose();
        logits.rowwise() += params.mlm_out_bias.transpose();
        result.mlm_logits = std::move(logits);
    }

    if (capture) {
        AttentionRecord record;
        record.word_alignment.assign(encoding.word_alignment.begin(),
                                     encoding.word_alignment.begin() + seq_len);
        record.weights.resize(cache.layers.size());
        for (std::size_t l = 0; l < cache.layers.size(); ++l)
            record.weights[l] = cache.layers[l].probs;
        result.attention = std::move(record);
    }
    return result;
}

Vector classify_logits(const EncoderParams& params, const Encoding& encoding) {
    return forward(params, encoding).cls_logits;
}

Topic classify(const EncoderParams& params, const SubwordVocab& vocab, std::string_view text) {
    Encoding enc = encode(vocab, text, params.config.max_seq_len);
    Vector logits = classify_logits(params, enc);
    int best = 0;
    for (int c = 1; c < logits.size(); ++c)
        if (logits(c) > logits(best)) best = c;
    return topic_at(best);
}

namespace {

json config_to_json(const EncoderConfig& config) {
    return json{{"num_layers", config.num_layers},
                {"num_heads", config.num_heads},
                {"hidden_size", config.hidden_size},
                {"ffn_size", config.ffn_size},
                {"max_seq_len", config.max_seq_len},
                {"vocab_size", config.vocab_size},
                {"dropout_rate", config.dropout_rate},
                {"layer_norm_eps", config.layer_norm_eps}};
}

EncoderConfig config_from_json(const json& j) {
    EncoderConfig config;
    config.num_layers = j.at("num_layers").get<int>();
    config.num_heads = j.at("num_heads").get<int>();
    config.hidden_size = j.at("hidden_size").get<int>();
    config.ffn_size = j.at("ffn_size").get<int>();
    config.max_seq_len = j.at("max_seq_len").get<int>();
    config.vocab_size = j.at("vocab_size").get<int>();
    config.dropout_rate = j.at("dropout_rate").get<double>();
    config.layer_norm_eps = j.at("layer_norm_eps").get<double>();
    return config;
}

constexpr char kCheckpointMagic[8] = {'A', 'D', 'M', 'E', 'C', 'K', 'P', '1'};

}  // namespace

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint: " + path);

    EncoderParams& params = const_cast<EncoderParams&>(checkpoint.params);
    std::vector<TensorRef> tensors = collect_tensors(params);

    json header;
    header["format_version"] = 1;
    header["config"] = config_to_json(params.config);
    header["vocab_pieces"] = checkpoint.vocab.pieces;
    header["frozen"] = std::vector<int>(params.frozen.begin(), params.frozen.end());
    header["rng_state"] = std::to_string(checkpoint.rng_state);
    json tensor_list = json::array();
    for (const TensorRef& t : tensors)
        tensor_list.push_back(json{{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}});
    header["tensors"] = tensor_list;

    const std::string header_bytes = header.dump();
    const std::uint32_t version = 1;
    const std::uint64_t header_len = header_bytes.size();
    out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    out.write(reinterpret_cast<const char*>(&header_len), sizeof(header_len));
    out.write(header_bytes.data(), static_cast<std::streamsize>(header_bytes.size()));
    // Tensor payload: row-major doubles, little-endian.
    for (const TensorRef& t : tensors) {
        for (Eigen::Index r = 0; r < t.rows; ++r) {
            for (Eigen::Index c = 0; c < t.cols; ++c) {
                double v = t.data[c * t.rows + r];
                out.write(reinterpret_cast<const char*>(&v), sizeof(v));
            }
        }
    }
    if (!out) throw IoError("error writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path);

    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
        throw ParseError("not a checkpoint file: " + path);
    std::uint32_t version = 0;
    std::uint64_t header_len = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&header_len), sizeof(header_len));
    if (!in || version != 1)
        throw ParseError("unsupported checkpoint version in " + path);
    std::string header_bytes(header_len, '\0');
    in.read(header_bytes.data(), static_cast<std::streamsize>(header_len));
    if (!in) throw ParseError("truncated checkpoint header: " + path);

    json header;
    try {
        header = json::parse(header_bytes);
    } catch (const json::parse_error& e) {
        throw ParseError("corrupt checkpoint header: " + std::string(e.what()));
    }

    Checkpoint checkpoint;
    checkpoint.params = allocate_params(config_from_json(header.at("config")));
    checkpoint.vocab.pieces = header.at("vocab_pieces").get<std::vector<std::string>>();
    checkpoint.vocab.rebuild_index();
    std::vector<int> frozen = header.at("frozen").get<std::vector<int>>();
    if (frozen.size() != checkpoint.params.frozen.size())
        throw ParseError("checkpoint freeze flags do not match config: " + path);
    for (std::size_t i = 0; i < frozen.size(); ++i)
        checkpoint.params.frozen[i] = static_cast<char>(frozen[i]);
    checkpoint.rng_state = std::stoull(header.at("rng_state").get<std::string>());

    std::vector<TensorRef> tensors = collect_tensors(checkpoint.params);
    std::unordered_map<std::string, const TensorRef*> by_name;
    for (const TensorRef& t : tensors) by_name.emplace(t.name, &t);

    for (const json& entry : header.at("tensors")) {
        const std::string name = entry.at("name").get<std::string>();
        auto it = by_name.find(name);
        if (it == by_name.end())
            throw ParseError("checkpoint contains unknown tensor '" + name + "'");
        const TensorRef& t = *it->second;
        if (entry.at("rows").get<Eigen::Index>() != t.rows ||
            entry.at("cols").get<Eigen::Index>() != t.cols)
            throw ParseError("checkpoint shape mismatch for tensor '" + name + "'");
        for (Eigen::Index r = 0; r < t.rows; ++r) {
            for (Eigen::Index c = 0; c < t.cols; ++c) {
                double v = 0;
                in.read(reinterpret_cast<char*>(&v), sizeof(v));
                t.data[c * t.rows + r] = v;
            }
        }
    }
    if (!in) throw ParseError("truncated checkpoint payload: " + path);
    return checkpoint;
}

}  // namespace adme
