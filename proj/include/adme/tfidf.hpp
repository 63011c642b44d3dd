#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "adme/types.hpp"

namespace adme {

// Fitted vocabulary with smoothed inverse-document-frequency weights.
// Vocabulary order: descending document frequency, ties lexicographic.
struct TfidfModel {
    std::vector<std::string> vocabulary;
    Vector idf;
    long doc_count = 0;

    int index_of(const std::string& term) const {
        auto it = index_.find(term);
        return it == index_.end() ? -1 : it->second;
    }
    void rebuild_index();

  private:
    std::unordered_map<std::string, int> index_;
};

// Vocabulary = top max_features terms by document frequency;
// idf(t) = ln((1+N)/(1+df(t))) + 1.
TfidfModel fit_tfidf(const std::vector<std::vector<std::string>>& corpus, int max_features = 128);

// Raw term counts scaled by idf, then L2-normalized; all-zero stays all-zero.
Vector tfidf_transform(const TfidfModel& model, const std::vector<std::string>& tokens);

void save_tfidf(const TfidfModel& model, const std::string& path);
TfidfModel load_tfidf(const std::string& path);

}  // namespace adme
