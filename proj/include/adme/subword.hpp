#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace adme {

// Subword vocabulary. Continuation pieces carry a "##" prefix; the five
// special tokens occupy ids 0..4.
struct SubwordVocab {
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    static constexpr int kCls = 2;
    static constexpr int kSep = 3;
    static constexpr int kMask = 4;
    static constexpr int kNumSpecials = 5;

    std::vector<std::string> pieces;

    int id_of(const std::string& piece) const {
        auto it = index_.find(piece);
        return it == index_.end() ? -1 : it->second;
    }
    int size() const { return static_cast<int>(pieces.size()); }
    void rebuild_index();

  private:
    std::unordered_map<std::string, int> index_;
};

// Iterative pair-merge construction: starting from the per-character
// alphabet (both word-initial and "##" continuation forms), the highest
// frequency adjacent pair is merged each round until target_size is reached
// or no pair occurs twice. Frequency ties break to the pair whose piece ids
// are smallest (insertion order).
SubwordVocab train_subword_vocab(const std::vector<std::string>& corpus, int target_size);

struct Encoding {
    std::vector<int> ids;             // [CLS] pieces... [SEP] padded to max_len
    std::vector<int> attention_mask;  // 1 for non-PAD positions
    std::vector<int> word_alignment;  // word index per position; -1 for specials/pad
    int num_real = 0;                 // positions before padding (incl. CLS/SEP)
};

// Greedy longest-match per word with "##" continuations; characters with no
// piece become [UNK]. Pieces are truncated to max_len-2 so [SEP] is always
// the final real token.
Encoding encode(const SubwordVocab& vocab, std::string_view text, int max_len = 128);

void save_vocab(const SubwordVocab& vocab, const std::string& path);
SubwordVocab load_vocab(const std::string& path);

}  // namespace adme
