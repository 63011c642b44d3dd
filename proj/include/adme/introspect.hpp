#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adme/encoder.hpp"
#include "adme/types.hpp"

namespace adme {

// Forward pass with attention capture, dropout off, trimmed to the real
// token span (no PAD columns).
AttentionRecord capture_attentions(const EncoderParams& params, const SubwordVocab& vocab,
                                   std::string_view text);

// Word-level view: key weights summed over the pieces of a word, query rows
// averaged. Special tokens stay as their own units.
AttentionRecord merge_subword_attention(const AttentionRecord& record);

struct CosineResult {
    double value = 0.0;
    bool degenerate = false;  // set when either input flattens to a zero vector
};

CosineResult flattened_cosine_checked(const Matrix& a, const Matrix& b);
double flattened_cosine(const Matrix& a, const Matrix& b);

struct DriftResult {
    Matrix mean_similarity;  // [layers x heads]
    int argmin_layer = 0;    // cell with the largest average change
    int argmin_head = 0;
    int sample_count = 0;
};

// Mean per-layer-per-head flattened cosine between the two models' attention
// maps over the sample texts. Both models must share config and vocabulary.
DriftResult attention_drift(const EncoderParams& before, const EncoderParams& after,
                            const SubwordVocab& vocab, const std::vector<std::string>& texts,
                            bool merged = false);

void export_attention_view(const AttentionRecord& record,
                           const std::optional<DriftResult>& drift, const std::string& path);

struct AttentionView {
    AttentionRecord record;
    std::optional<DriftResult> drift;
};

AttentionView read_attention_view(const std::string& path);

}  // namespace adme
