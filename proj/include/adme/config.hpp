#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "adme/annotator.hpp"
#include "adme/encoder.hpp"
#include "adme/encoder_train.hpp"
#include "adme/keyword_rules.hpp"
#include "adme/label_index.hpp"
#include "adme/linear_model.hpp"
#include "adme/random_forest.hpp"
#include "adme/synthetic.hpp"

namespace adme {

// One config file for the whole pipeline (JSON, keys documented in the
// README). CLI flags override individual values; the effective config is
// snapshotted into every report.
struct AppConfig {
    std::uint64_t seed = 42;
    AnnotatorConfig annotator = AnnotatorConfig::defaults();
    KeywordTable rules = default_keyword_table();
    int tfidf_max_features = 128;
    LinearHyper logistic;
    LinearHyper svm;
    ForestHyper forest;
    EncoderConfig encoder;
    int vocab_target = 2000;  // subword vocabulary size trained from the corpus
    InitScheme init_scheme = InitScheme::TruncatedNormal;
    PretrainConfig pretrain;
    FinetuneConfig finetune;
    FetchOptions fetch;
    int eval_folds = 5;
    int holdout_per_class = 200;
    SyntheticSpec synth;

    static AppConfig load(const std::string& path);  // defaults when path empty
    nlohmann::json snapshot() const;
};

}  // namespace adme
