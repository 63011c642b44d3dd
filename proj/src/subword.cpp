#include "adme/subword.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "adme/error.hpp"
#include "adme/text.hpp"

namespace adme {

namespace {

const char* kSpecialNames[] = {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};

std::string strip_continuation(const std::string& piece) {
    return piece.rfind("##", 0) == 0 ? piece.substr(2) : piece;
}

}  // namespace

void SubwordVocab::rebuild_index() {
    index_.clear();
    index_.reserve(pieces.size());
    for (std::size_t i = 0; i < pieces.size(); ++i)
        index_.emplace(pieces[i], static_cast<int>(i));
}

SubwordVocab train_subword_vocab(const std::vector<std::string>& corpus, int target_size) {
    if (corpus.empty()) throw TrainError("train_subword_vocab: empty corpus");

    // Word types in first-occurrence order with frequencies.
    std::vector<std::string> word_list;
    std::vector<long> word_freq;
    {
        std::unordered_map<std::string, std::size_t> slot;
        for (const std::string& text : corpus) {
            for (std::string& w : tokenize_words(text)) {
                auto [it, inserted] = slot.try_emplace(w, word_list.size());
                if (inserted) {
                    word_list.push_back(std::move(w));
                    word_freq.push_back(1);
                } else {
                    ++word_freq[it->second];
                }
            }
        }
    }
    if (word_list.empty()) throw TrainError("train_subword_vocab: corpus has no word tokens");

    SubwordVocab vocab;
    for (const char* name : kSpecialNames) vocab.pieces.emplace_back(name);

    // Alphabet: both forms for every character, in first-occurrence order.
    std::unordered_map<std::string, int> piece_id;
    auto add_piece = [&](const std::string& piece) {
        auto [it, inserted] = piece_id.try_emplace(piece, static_cast<int>(vocab.pieces.size()));
        if (inserted) vocab.pieces.push_back(piece);
        return it->second;
    };
    for (const std::string& word : word_list) {
        for (char c : word) {
            add_piece(std::string(1, c));
            add_piece(std::string("##") + c);
        }
    }

    const int min_size = static_cast<int>(vocab.pieces.size());
    if (target_size < min_size)
        throw ConfigError("train_subword_vocab: target_size " + std::to_string(target_size) +
                          " below minimum " + std::to_string(min_size) +
                          " (specials + alphabet)");

    // Each word type as a sequence of piece ids.
    std::vector<std::vector<int>> sequences(word_list.size());
    for (std::size_t w = 0; w < word_list.size(); ++w) {
        const std::string& word = word_list[w];
        sequences[w].reserve(word.size());
        for (std::size_t i = 0; i < word.size(); ++i) {
            std::string piece = i == 0 ? std::string(1, word[i]) : std::string("##") + word[i];
            sequences[w].push_back(piece_id.at(piece));
        }
    }

    while (static_cast<int>(vocab.pieces.size()) < target_size) {
        std::map<std::pair<int, int>, long> pair_counts;
        for (std::size_t w = 0; w < word_list.size(); ++w) {
            const std::vector<int>& seq = sequences[w];
            for (std::size_t i = 0; i + 1 < seq.size(); ++i)
                pair_counts[{seq[i], seq[i + 1]}] += word_freq[w];
        }
        std::pair<int, int> best{-1, -1};
        long best_count = 0;
        for (const auto& [pair, count] : pair_counts) {
            if (count > best_count) {
                best = pair;
                best_count = count;
            }
            // std::map iterates pairs in ascending id order, so ties keep the
            // earliest-inserted pieces.
        }
        if (best_count < 2) break;

        std::string merged =
            vocab.pieces[static_cast<std::size_t>(best.first)] +
            strip_continuation(vocab.pieces[static_cast<std::size_t>(best.second)]);
        int merged_id = add_piece(merged);

        for (std::vector<int>& seq : sequences) {
            std::vector<int> next;
            next.reserve(seq.size());
            for (std::size_t i = 0; i < seq.size();) {
                if (i + 1 < seq.size() && seq[i] == best.first && seq[i + 1] == best.second) {
                    next.push_back(merged_id);
                    i += 2;
                } else {
                    next.push_back(seq[i]);
                    ++i;
                }
            }
            seq = std::move(next);
        }
    }

    vocab.rebuild_index();
    return vocab;
}

Encoding encode(const SubwordVocab& vocab, std::string_view text, int max_len) {
    if (max_len < 2) throw ConfigError("encode: max_len must be >= 2");

    std::vector<std::string> words = tokenize_words(text);
    std::vector<int> piece_ids;
    std::vector<int> piece_words;
    for (std::size_t w = 0; w < words.size(); ++w) {
        const std::string& word = words[w];
        std::size_t start = 0;
        while (start < word.size()) {
            int matched = -1;
            std::size_t matched_end = start;
            for (std::size_t end = word.size(); end > start; --end) {
                std::string cand = (start > 0 ? "##" : "") + word.substr(start, end - start);
                int id = vocab.id_of(cand);
                if (id >= 0) {
                    matched = id;
                    matched_end = end;
                    break;
                }
            }
            if (matched < 0) {
                piece_ids.push_back(SubwordVocab::kUnk);
                piece_words.push_back(static_cast<int>(w));
                ++start;
            } else {
                piece_ids.push_back(matched);
                piece_words.push_back(static_cast<int>(w));
                start = matched_end;
            }
        }
    }

    const std::size_t budget = static_cast<std::size_t>(max_len - 2);
    if (piece_ids.size() > budget) {
        piece_ids.resize(budget);
        piece_words.resize(budget);
    }

    Encoding enc;
    enc.ids.reserve(static_cast<std::size_t>(max_len));
    enc.ids.push_back(SubwordVocab::kCls);
    enc.word_alignment.push_back(-1);
    for (std::size_t i = 0; i < piece_ids.size(); ++i) {
        enc.ids.push_back(piece_ids[i]);
        enc.word_alignment.push_back(piece_words[i]);
    }
    enc.ids.push_back(SubwordVocab::kSep);
    enc.word_alignment.push_back(-1);
    enc.num_real = static_cast<int>(enc.ids.size());
    enc.attention_mask.assign(enc.ids.size(), 1);
    while (static_cast<int>(enc.ids.size()) < max_len) {
        enc.ids.push_back(SubwordVocab::kPad);
        enc.word_alignment.push_back(-1);
        enc.attention_mask.push_back(0);
    }
    return enc;
}

void save_vocab(const SubwordVocab& vocab, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write vocab: " + path);
    out << "subword 1\n" << vocab.pieces.size() << '\n';
    for (const std::string& piece : vocab.pieces) out << piece << '\n';
}

SubwordVocab load_vocab(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open vocab: " + path);
    std::string magic;
    int version = 0;
    std::size_t count = 0;
    in >> magic >> version >> count;
    if (magic != "subword" || version != 1)
        throw ParseError("not a subword vocab file (or unsupported version): " + path);
    std::string line;
    std::getline(in, line);
    SubwordVocab vocab;
    vocab.pieces.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) throw ParseError("truncated vocab: " + path);
        vocab.pieces.push_back(line);
    }
    vocab.rebuild_index();
    return vocab;
}

}  // namespace adme
