#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adme/encoder.hpp"
#include "adme/types.hpp"

namespace adme {

// --- gradients -------------------------------------------------------------

// Gradient of the classifier cross-entropy w.r.t. every parameter,
// accumulated into `grads` (an EncoderParams-shaped container). `d_final`
// accumulates the gradient w.r.t. the final hidden states so several heads
// can share one encoder backward pass.
double cls_head_backward(const EncoderParams& params, const ForwardCache& cache, int label,
                         double loss_scale, EncoderParams& grads, Matrix& d_final);

struct MlmTarget {
    int position = 0;
    int target_id = 0;
};

double mlm_head_backward(const EncoderParams& params, const ForwardCache& cache,
                         const std::vector<MlmTarget>& targets, double loss_scale,
                         EncoderParams& grads, Matrix& d_final);

// Backpropagates d_final through the encoder stack and embeddings.
void encoder_backward(const EncoderParams& params, const ForwardCache& cache,
                      const Matrix& d_final, EncoderParams& grads);

// --- optimizer ---------------------------------------------------------------

// Adam with decoupled weight decay. Frozen parameter groups are skipped
// entirely (no moment updates, no decay), keeping them bit-identical.
// Decay applies only to weight matrices, not biases or layer-norm terms.
class AdamW {
  public:
    explicit AdamW(const EncoderParams& shape, double beta1 = 0.9, double beta2 = 0.999,
                   double eps = 1e-8, double weight_decay = 0.01);
    void step(EncoderParams& params, EncoderParams& grads, double lr);
    long step_count() const { return step_; }

  private:
    EncoderParams m_, v_;
    double beta1_, beta2_, eps_, weight_decay_;
    long step_ = 0;
};

// Linear warmup over the leading fraction of steps, then linear decay to 0.
struct LrSchedule {
    double peak = 1e-3;
    long total_steps = 1;
    double warmup_fraction = 0.1;
    double at(long step) const;  // step in [1, total_steps]
};

// --- training loops ----------------------------------------------------------

struct PretrainConfig {
    double mask_fraction = 0.15;
    int epochs = 10;
    int batch_size = 32;
    double learning_rate = 1e-3;
    double warmup_fraction = 0.1;
    std::uint64_t seed = 0;
    std::string metrics_log;  // optional JSONL path
};

struct PretrainResult {
    std::vector<double> loss_history;  // mean masked-LM loss per epoch
};

// Masked-LM pretraining: 15% of non-special positions selected per sequence
// (at least one); of those 80% become [MASK], 10% a random piece, 10% stay.
PretrainResult pretrain_mlm(EncoderParams& params, const SubwordVocab& vocab,
                            const std::vector<std::string>& corpus, const PretrainConfig& config);

struct FinetuneConfig {
    int batch_size = 32;
    double learning_rate = 3e-5;
    int epochs = 10;
    double warmup_fraction = 0.1;
    std::optional<int> freeze_top_n;  // absent = full fine-tuning; 0 = head only
    bool select_on_validation = true;
    std::uint64_t seed = 0;
    std::string metrics_log;
};

struct FinetuneResult {
    std::vector<double> loss_history;    // mean training loss per epoch
    std::vector<double> val_f1_history;  // macro-F1 per epoch (empty without val)
    int best_epoch = -1;
};

FinetuneResult finetune(EncoderParams& params, const SubwordVocab& vocab,
                        const std::vector<LabeledParagraph>& train,
                        const std::vector<LabeledParagraph>& val, const FinetuneConfig& config);

// --- grid search -------------------------------------------------------------

inline const std::vector<int> kDefaultBatchGrid = {10, 16, 32, 64};
inline const std::vector<double> kDefaultLrGrid = {5e-6, 1e-5, 3e-5, 5e-5};

struct GridCell {
    int batch_size = 0;
    double learning_rate = 0.0;
    double score = 0.0;
};

struct GridResult {
    std::vector<GridCell> cells;
    int best_batch = 0;
    double best_lr = 0.0;
    double best_score = 0.0;
};

// Exhaustive search; ties prefer the larger batch, then the smaller rate.
GridResult grid_search(const std::vector<int>& batch_sizes,
                       const std::vector<double>& learning_rates,
                       const std::function<double(int, double)>& evaluate);

}  // namespace adme
