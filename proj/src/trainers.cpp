#include "adme/trainers.hpp"

#include "adme/error.hpp"
#include "adme/rng.hpp"
#include "adme/text.hpp"

namespace adme {

namespace {

class RuleClassifier : public TextClassifier {
  public:
    RuleClassifier(KeywordTable table, std::uint64_t seed)
        : table_(std::move(table)), seed_(seed) {}
    Topic classify(const std::string& text) const override {
        return rule_classify(text, table_, derive_seed(seed_, fnv1a64(text)));
    }

  private:
    KeywordTable table_;
    std::uint64_t seed_;
};

class TfidfLinearClassifier : public TextClassifier {
  public:
    TfidfLinearClassifier(TfidfModel tfidf, LinearModel model)
        : tfidf_(std::move(tfidf)), model_(std::move(model)) {}
    Topic classify(const std::string& text) const override {
        Vector x = tfidf_transform(tfidf_, tokenize_words(text));
        return topic_at(predict_class(model_, x));
    }

  private:
    TfidfModel tfidf_;
    LinearModel model_;
};

class TfidfForestClassifier : public TextClassifier {
  public:
    TfidfForestClassifier(TfidfModel tfidf, ForestModel model)
        : tfidf_(std::move(tfidf)), model_(std::move(model)) {}
    Topic classify(const std::string& text) const override {
        Vector x = tfidf_transform(tfidf_, tokenize_words(text));
        return topic_at(predict_class(model_, x));
    }

  private:
    TfidfModel tfidf_;
    ForestModel model_;
};

class EncoderClassifier : public TextClassifier {
  public:
    EncoderClassifier(EncoderParams params, SubwordVocab vocab)
        : params_(std::move(params)), vocab_(std::move(vocab)) {}
    Topic classify(const std::string& text) const override {
        return adme::classify(params_, vocab_, text);
    }
    const EncoderParams& params() const { return params_; }

  private:
    EncoderParams params_;
    SubwordVocab vocab_;
};

TfidfModel fit_tfidf_on(const std::vector<LabeledParagraph>& train, int max_features) {
    std::vector<std::vector<std::string>> docs;
    docs.reserve(train.size());
    for (const LabeledParagraph& p : train) docs.push_back(tokenize_words(p.text));
    return fit_tfidf(docs, max_features);
}

Matrix feature_matrix(const TfidfModel& tfidf, const std::vector<LabeledParagraph>& train) {
    Matrix X(static_cast<Eigen::Index>(train.size()),
             static_cast<Eigen::Index>(tfidf.vocabulary.size()));
    for (std::size_t i = 0; i < train.size(); ++i)
        X.row(static_cast<Eigen::Index>(i)) =
            tfidf_transform(tfidf, tokenize_words(train[i].text)).transpose();
    return X;
}

std::vector<int> label_vector(const std::vector<LabeledParagraph>& train) {
    std::vector<int> labels;
    labels.reserve(train.size());
    for (const LabeledParagraph& p : train) labels.push_back(topic_index(p.topic));
    return labels;
}

}  // namespace

std::unique_ptr<TextClassifier> RuleTrainer::fit(const std::vector<LabeledParagraph>&,
                                                 const std::vector<LabeledParagraph>&,
                                                 std::uint64_t seed) const {
    return std::make_unique<RuleClassifier>(table_, seed);
}

std::unique_ptr<TextClassifier> TfidfLinearTrainer::fit(
    const std::vector<LabeledParagraph>& train, const std::vector<LabeledParagraph>&,
    std::uint64_t seed) const {
    TfidfModel tfidf = fit_tfidf_on(train, max_features_);
    Matrix X = feature_matrix(tfidf, train);
    LinearHyper hyper = hyper_;
    hyper.seed = seed;
    LinearModel model = kind_ == LinearKind::Logistic
                            ? train_logistic(X, label_vector(train), kNumTopics, hyper)
                            : train_linear_svm(X, label_vector(train), kNumTopics, hyper);
    return std::make_unique<TfidfLinearClassifier>(std::move(tfidf), std::move(model));
}

std::unique_ptr<TextClassifier> TfidfForestTrainer::fit(
    const std::vector<LabeledParagraph>& train, const std::vector<LabeledParagraph>&,
    std::uint64_t seed) const {
    TfidfModel tfidf = fit_tfidf_on(train, max_features_);
    Matrix X = feature_matrix(tfidf, train);
    ForestHyper hyper = hyper_;
    hyper.seed = seed;
    ForestModel model = train_random_forest(X, label_vector(train), kNumTopics, hyper);
    return std::make_unique<TfidfForestClassifier>(std::move(tfidf), std::move(model));
}

std::unique_ptr<TextClassifier> EncoderTrainer::fit(const std::vector<LabeledParagraph>& train,
                                                    const std::vector<LabeledParagraph>& val,
                                                    std::uint64_t seed) const {
    EncoderParams params;
    SubwordVocab vocab;
    if (pretrained_) {
        vocab = pretrained_->vocab;
        // Fresh task head per run; the encoder stack keeps its pretrained
        // weights.
        params = reinit_top_layers(pretrained_->params, 0, InitScheme::TruncatedNormal, seed);
    } else {
        std::vector<std::string> texts;
        texts.reserve(train.size());
        for (const LabeledParagraph& p : train) texts.push_back(p.text);
        vocab = train_subword_vocab(texts, vocab_target_);
        EncoderConfig config = config_;
        config.vocab_size = vocab.size();
        params = init_params(config, scheme_, seed);
    }
    FinetuneConfig cfg = finetune_;
    cfg.seed = seed;
    finetune(params, vocab, train, val, cfg);
    return std::make_unique<EncoderClassifier>(std::move(params), std::move(vocab));
}

}  // namespace adme
