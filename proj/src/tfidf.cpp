#include "adme/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "adme/error.hpp"

namespace adme {

void TfidfModel::rebuild_index() {
    index_.clear();
    index_.reserve(vocabulary.size());
    for (std::size_t i = 0; i < vocabulary.size(); ++i)
        index_.emplace(vocabulary[i], static_cast<int>(i));
}

TfidfModel fit_tfidf(const std::vector<std::vector<std::string>>& corpus, int max_features) {
    if (corpus.empty()) throw TrainError("fit_tfidf: empty corpus");
    if (max_features < 1) throw ConfigError("fit_tfidf: max_features must be >= 1");

    std::map<std::string, long> df;
    for (const auto& doc : corpus) {
        std::set<std::string> uniq(doc.begin(), doc.end());
        for (const std::string& term : uniq) ++df[term];
    }

    std::vector<std::pair<std::string, long>> terms(df.begin(), df.end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (static_cast<int>(terms.size()) > max_features)
        terms.resize(static_cast<std::size_t>(max_features));

    TfidfModel model;
    model.doc_count = static_cast<long>(corpus.size());
    model.vocabulary.reserve(terms.size());
    model.idf.resize(static_cast<Eigen::Index>(terms.size()));
    const double n = static_cast<double>(model.doc_count);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        model.vocabulary.push_back(terms[i].first);
        model.idf(static_cast<Eigen::Index>(i)) =
            std::log((1.0 + n) / (1.0 + static_cast<double>(terms[i].second))) + 1.0;
    }
    model.rebuild_index();
    return model;
}

Vector tfidf_transform(const TfidfModel& model, const std::vector<std::string>& tokens) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(model.vocabulary.size()));
    for (const std::string& token : tokens) {
        int idx = model.index_of(token);
        if (idx >= 0) v(idx) += 1.0;
    }
    v = v.cwiseProduct(model.idf);
    double norm = v.norm();
    if (norm > 0.0) v /= norm;
    return v;
}

void save_tfidf(const TfidfModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write tfidf model: " + path);
    out << "tfidf 1\n" << model.doc_count << ' ' << model.vocabulary.size() << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < model.vocabulary.size(); ++i)
        out << model.vocabulary[i] << ' ' << model.idf(static_cast<Eigen::Index>(i)) << '\n';
}

TfidfModel load_tfidf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tfidf model: " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "tfidf" || version != 1)
        throw ParseError("not a tfidf model file (or unsupported version): " + path);
    TfidfModel model;
    std::size_t n = 0;
    in >> model.doc_count >> n;
    model.vocabulary.resize(n);
    model.idf.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) in >> model.vocabulary[i] >> model.idf(static_cast<Eigen::Index>(i));
    if (!in) throw ParseError("truncated tfidf model: " + path);
    model.rebuild_index();
    return model;
}

}  // namespace adme
