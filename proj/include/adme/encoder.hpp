#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adme/rng.hpp"
#include "adme/subword.hpp"
#include "adme/types.hpp"

namespace adme {

struct EncoderConfig {
    int num_layers = 4;
    int num_heads = 4;
    int hidden_size = 128;
    int ffn_size = 512;
    int max_seq_len = 128;
    int vocab_size = 0;
    double dropout_rate = 0.1;
    double layer_norm_eps = 1e-12;

    int head_dim() const { return hidden_size / num_heads; }
    void validate() const;
    bool operator==(const EncoderConfig&) const = default;
};

struct LayerParams {
    Matrix wq, wk, wv, wo;  // [d x d]
    Vector bq, bk, bv, bo;  // [d]
    Matrix ffn_in;          // [d x ffn]
    Vector ffn_in_bias;     // [ffn]
    Matrix ffn_out;         // [ffn x d]
    Vector ffn_out_bias;    // [d]
    Vector ln1_gain, ln1_bias;
    Vector ln2_gain, ln2_bias;
};

// Parameter groups for freezing and gradient bookkeeping:
// 0 = embeddings, 1..L = encoder layers, L+1 = MLM head, L+2 = classifier.
struct EncoderParams {
    EncoderConfig config;
    Matrix token_embedding;     // [V x d]
    Matrix position_embedding;  // [max_seq_len x d]
    Matrix segment_embedding;   // [2 x d]
    Vector emb_ln_gain, emb_ln_bias;
    std::vector<LayerParams> layers;
    Matrix mlm_dense;  // [d x d]
    Vector mlm_dense_bias;
    Vector mlm_ln_gain, mlm_ln_bias;
    Vector mlm_out_bias;  // [V]; output projection is tied to token_embedding
    Matrix cls_weight;    // [kNumTopics x d]
    Vector cls_bias;      // [kNumTopics]
    std::vector<char> frozen;  // one flag per parameter group

    int num_groups() const { return config.num_layers + 3; }
    int mlm_group() const { return config.num_layers + 1; }
    int classifier_group() const { return config.num_layers + 2; }
    bool group_frozen(int group) const { return frozen[static_cast<std::size_t>(group)] != 0; }
};

enum class TensorKind : int { Weight = 0, LnGain = 1, LnBias = 2 };

struct TensorRef {
    std::string name;
    int group = 0;
    TensorKind kind = TensorKind::Weight;
    double* data = nullptr;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    Eigen::Index size() const { return rows * cols; }
};

// Stable enumeration of every parameter tensor; the same order is used for
// initialization, optimizer state, and checkpoints.
std::vector<TensorRef> collect_tensors(EncoderParams& params);

// Same shapes, all tensors zero. Used as the gradient/optimizer-state
// container.
EncoderParams zeros_like(const EncoderParams& params);

enum class InitScheme : int { TruncatedNormal = 0, Uniform = 1 };

std::optional<InitScheme> init_scheme_from_string(std::string_view name);
const char* to_string(InitScheme scheme);

// Truncated normal: N(0, 0.02^2) rejecting |x| > 0.04. Uniform: U(-0.1, 0.1).
// Layer-norm gains start at 1 and layer-norm biases at 0 under both schemes.
EncoderParams init_params(const EncoderConfig& config, InitScheme scheme, std::uint64_t seed);

// Re-samples layers L-n+1..L under the scheme; the classifier head is always
// freshly initialized; everything else is bit-identical to the input.
EncoderParams reinit_top_layers(const EncoderParams& params, int n, InitScheme scheme,
                                std::uint64_t seed);

void freeze_all_but_head(EncoderParams& params);
// Leaves the top `top_n` layers plus the classifier head trainable.
void freeze_bottom_layers(EncoderParams& params, int top_n);
void unfreeze_all(EncoderParams& params);

// Scaled dot-product attention over one head. Rows of Q/K/V are positions;
// key_mask marks valid key positions. Masked keys receive exactly zero
// weight.
void scaled_dot_attention(const Matrix& queries, const Matrix& keys, const Matrix& values,
                          const std::vector<int>& key_mask, Matrix& context, Matrix& weights);

Matrix softmax_rows(const Matrix& logits);
double gelu(double x);
double gelu_derivative(double x);

// Per-layer, per-head attention maps for one input, with token alignment.
struct AttentionRecord {
    std::vector<std::string> tokens;
    std::vector<std::vector<Matrix>> weights;  // [layer][head], each T x T
    std::vector<int> word_alignment;           // -1 for special tokens
    bool merged = false;

    int num_layers() const { return static_cast<int>(weights.size()); }
    int num_heads() const { return weights.empty() ? 0 : static_cast<int>(weights[0].size()); }
};

// Activations kept by the forward pass for backpropagation. Sequence length
// T may be shorter than config.max_seq_len (batches run at their own max).
struct ForwardCache {
    int seq_len = 0;
    bool training = false;
    std::vector<int> ids;
    std::vector<int> key_mask;
    Matrix embedded;  // pre-layer-norm embedding sum
    Matrix emb_normed, emb_hat;
    Vector emb_rstd;
    Matrix emb_dropout;
    struct LayerCache {
        Matrix input;  // X entering the layer
        Matrix q, k, v;
        std::vector<Matrix> probs;  // per head, T x T
        Matrix context;             // concatenated heads
        Matrix attn_out;            // context * wo + bo
        Matrix attn_dropout;
        Matrix resid1, x1_hat, x1;  // post-attention layer norm
        Vector ln1_rstd;
        Matrix ffn_pre, ffn_act, ffn_out;
        Matrix ffn_dropout;
        Matrix resid2, x2_hat, x2;  // post-FFN layer norm
        Vector ln2_rstd;
    };
    std::vector<LayerCache> layers;
    const Matrix& final_hidden() const { return layers.back().x2; }
};

// Runs the encoder stack over the first seq_len positions of the encoding.
// When training is true, dropout is applied with masks drawn from `rng`.
void encoder_forward(const EncoderParams& params, const std::vector<int>& ids,
                     const std::vector<int>& key_mask, int seq_len, bool training,
                     SplitMix64& rng, ForwardCache& cache);

struct ForwardResult {
    Vector cls_logits;                   // [kNumTopics]
    std::optional<Matrix> mlm_logits;    // [T x V] over real positions
    std::optional<AttentionRecord> attention;
};

// Evaluation-mode forward over a full encoding (no dropout).
ForwardResult forward(const EncoderParams& params, const Encoding& encoding, bool capture = false,
                      bool with_mlm_logits = false);

Vector classify_logits(const EncoderParams& params, const Encoding& encoding);
Topic classify(const EncoderParams& params, const SubwordVocab& vocab, std::string_view text);

// Versioned binary checkpoint: config, vocab, freeze flags, RNG state, and
// every parameter tensor (row-major little-endian doubles).
struct Checkpoint {
    EncoderParams params;
    SubwordVocab vocab;
    std::uint64_t rng_state = 0;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace adme
