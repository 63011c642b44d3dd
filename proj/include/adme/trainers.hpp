#pragma once

#include <optional>
#include <string>

#include "adme/encoder.hpp"
#include "adme/encoder_train.hpp"
#include "adme/eval.hpp"
#include "adme/keyword_rules.hpp"
#include "adme/linear_model.hpp"
#include "adme/random_forest.hpp"
#include "adme/tfidf.hpp"

namespace adme {

// Keyword rule baseline. Per-text tie-break seeds derive from the fit seed
// and a hash of the text, so classification is a pure function of both.
class RuleTrainer : public Trainer {
  public:
    explicit RuleTrainer(KeywordTable table = default_keyword_table())
        : table_(std::move(table)) {}
    std::unique_ptr<TextClassifier> fit(const std::vector<LabeledParagraph>& train,
                                        const std::vector<LabeledParagraph>& val,
                                        std::uint64_t seed) const override;
    std::string name() const override { return "rule"; }

  private:
    KeywordTable table_;
};

// TF-IDF features into logistic regression or a linear SVM.
class TfidfLinearTrainer : public Trainer {
  public:
    TfidfLinearTrainer(LinearKind kind, int max_features = 128, LinearHyper hyper = {})
        : kind_(kind), max_features_(max_features), hyper_(hyper) {}
    std::unique_ptr<TextClassifier> fit(const std::vector<LabeledParagraph>& train,
                                        const std::vector<LabeledParagraph>& val,
                                        std::uint64_t seed) const override;
    std::string name() const override { return kind_ == LinearKind::Logistic ? "logreg" : "svm"; }

  private:
    LinearKind kind_;
    int max_features_;
    LinearHyper hyper_;
};

class TfidfForestTrainer : public Trainer {
  public:
    explicit TfidfForestTrainer(int max_features = 128, ForestHyper hyper = {})
        : max_features_(max_features), hyper_(hyper) {}
    std::unique_ptr<TextClassifier> fit(const std::vector<LabeledParagraph>& train,
                                        const std::vector<LabeledParagraph>& val,
                                        std::uint64_t seed) const override;
    std::string name() const override { return "forest"; }

  private:
    int max_features_;
    ForestHyper hyper_;
};

// Mini encoder trainer. Starts from a pretrained checkpoint when given
// (classifier head re-initialized per fit seed), otherwise from a fresh
// initialization with a vocabulary trained on the provided corpus.
class EncoderTrainer : public Trainer {
  public:
    EncoderTrainer(EncoderConfig config, FinetuneConfig finetune_config,
                   InitScheme scheme = InitScheme::TruncatedNormal, int vocab_target = 2000)
        : config_(config),
          finetune_(finetune_config),
          scheme_(scheme),
          vocab_target_(vocab_target) {}

    void set_pretrained(Checkpoint checkpoint) { pretrained_ = std::move(checkpoint); }

    std::unique_ptr<TextClassifier> fit(const std::vector<LabeledParagraph>& train,
                                        const std::vector<LabeledParagraph>& val,
                                        std::uint64_t seed) const override;
    std::string name() const override { return "encoder"; }

  private:
    EncoderConfig config_;
    FinetuneConfig finetune_;
    InitScheme scheme_;
    int vocab_target_;
    std::optional<Checkpoint> pretrained_;
};

// Fixed-output classifier, handy for harness tests and poisoned grid cells.
class ConstantClassifier : public TextClassifier {
  public:
    explicit ConstantClassifier(Topic topic) : topic_(topic) {}
    Topic classify(const std::string&) const override { return topic_; }

  private:
    Topic topic_;
};

}  // namespace adme
