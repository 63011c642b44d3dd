#include "adme/config.hpp"

#include <fstream>

#include "adme/error.hpp"

namespace adme {

using nlohmann::json;

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void load_annotator(const json& j, AnnotatorConfig& config) {
    maybe(j, "strip_inline_title", config.strip_inline_title);
    if (j.contains("titles")) {
        config.titles.clear();
        for (const json& entry : j.at("titles")) {
            TitleRule rule;
            rule.title = entry.at("title").get<std::string>();
            auto topic = topic_from_string(entry.at("topic").get<std::string>());
            if (!topic)
                throw ConfigError("config: unknown topic in annotator.titles: " +
                                  entry.at("topic").get<std::string>());
            rule.topic = *topic;
            config.titles.push_back(std::move(rule));
        }
    }
}

void load_rules(const json& j, KeywordTable& table) {
    for (int c = 0; c < 4; ++c) {
        const char* name = to_string(topic_at(c));
        if (j.contains(name))
            table.keywords[static_cast<std::size_t>(c)] =
                j.at(name).get<std::vector<std::string>>();
    }
    table.validate();
}

void load_linear(const json& j, LinearHyper& hyper) {
    maybe(j, "l2_strength", hyper.l2_strength);
    maybe(j, "learning_rate", hyper.learning_rate);
    maybe(j, "epochs", hyper.epochs);
}

void load_forest(const json& j, ForestHyper& hyper) {
    maybe(j, "tree_count", hyper.tree_count);
    maybe(j, "max_depth", hyper.max_depth);
    maybe(j, "min_leaf", hyper.min_leaf);
    maybe(j, "bootstrap", hyper.bootstrap);
}

void load_encoder(const json& j, EncoderConfig& config) {
    maybe(j, "num_layers", config.num_layers);
    maybe(j, "num_heads", config.num_heads);
    maybe(j, "hidden_size", config.hidden_size);
    maybe(j, "ffn_size", config.ffn_size);
    maybe(j, "max_seq_len", config.max_seq_len);
    maybe(j, "dropout_rate", config.dropout_rate);
    maybe(j, "layer_norm_eps", config.layer_norm_eps);
}

void load_pretrain(const json& j, PretrainConfig& config) {
    maybe(j, "mask_fraction", config.mask_fraction);
    maybe(j, "epochs", config.epochs);
    maybe(j, "batch_size", config.batch_size);
    maybe(j, "learning_rate", config.learning_rate);
    maybe(j, "warmup_fraction", config.warmup_fraction);
}

void load_finetune(const json& j, FinetuneConfig& config) {
    maybe(j, "batch_size", config.batch_size);
    maybe(j, "learning_rate", config.learning_rate);
    maybe(j, "epochs", config.epochs);
    maybe(j, "warmup_fraction", config.warmup_fraction);
    maybe(j, "select_on_validation", config.select_on_validation);
    if (j.contains("freeze_top_n") && !j.at("freeze_top_n").is_null())
        config.freeze_top_n = j.at("freeze_top_n").get<int>();
}

void load_fetch(const json& j, FetchOptions& options) {
    maybe(j, "page_limit", options.page_limit);
    maybe(j, "retries", options.retries);
    maybe(j, "parallel", options.parallel);
    maybe(j, "doc_url_template", options.doc_url_template);
}

void load_synth(const json& j, SyntheticSpec& spec) {
    maybe(j, "per_class", spec.per_class);
    maybe(j, "keyword_rate", spec.keyword_rate);
    maybe(j, "cross_keyword_rate", spec.cross_keyword_rate);
    maybe(j, "other_keyword_rate", spec.other_keyword_rate);
}

}  // namespace

AppConfig AppConfig::load(const std::string& path) {
    AppConfig config;
    if (path.empty()) return config;

    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError("config: " + std::string(e.what()), static_cast<long>(e.byte));
    }

    maybe(j, "seed", config.seed);
    if (j.contains("annotator")) load_annotator(j.at("annotator"), config.annotator);
    if (j.contains("rules")) load_rules(j.at("rules"), config.rules);
    if (j.contains("tfidf")) maybe(j.at("tfidf"), "max_features", config.tfidf_max_features);
    if (j.contains("logistic")) load_linear(j.at("logistic"), config.logistic);
    if (j.contains("svm")) load_linear(j.at("svm"), config.svm);
    if (j.contains("forest")) load_forest(j.at("forest"), config.forest);
    if (j.contains("encoder")) load_encoder(j.at("encoder"), config.encoder);
    maybe(j, "vocab_target", config.vocab_target);
    if (j.contains("init_scheme")) {
        auto scheme = init_scheme_from_string(j.at("init_scheme").get<std::string>());
        if (!scheme)
            throw ConfigError("config: unknown init_scheme '" +
                              j.at("init_scheme").get<std::string>() + "'");
        config.init_scheme = *scheme;
    }
    if (j.contains("pretrain")) load_pretrain(j.at("pretrain"), config.pretrain);
    if (j.contains("finetune")) load_finetune(j.at("finetune"), config.finetune);
    if (j.contains("fetch")) load_fetch(j.at("fetch"), config.fetch);
    if (j.contains("eval")) {
        maybe(j.at("eval"), "folds", config.eval_folds);
        maybe(j.at("eval"), "holdout_per_class", config.holdout_per_class);
    }
    if (j.contains("synth")) load_synth(j.at("synth"), config.synth);
    return config;
}

json AppConfig::snapshot() const {
    json titles = json::array();
    for (const TitleRule& rule : annotator.titles)
        titles.push_back(json{{"title", rule.title}, {"topic", to_string(rule.topic)}});
    json rules_json = json::object();
    for (int c = 0; c < 4; ++c)
        rules_json[to_string(topic_at(c))] = rules.keywords[static_cast<std::size_t>(c)];
    return json{
        {"seed", seed},
        {"annotator",
         {{"titles", titles}, {"strip_inline_title", annotator.strip_inline_title}}},
        {"rules", rules_json},
        {"tfidf", {{"max_features", tfidf_max_features}}},
        {"logistic",
         {{"l2_strength", logistic.l2_strength},
          {"learning_rate", logistic.learning_rate},
          {"epochs", logistic.epochs}}},
        {"svm",
         {{"l2_strength", svm.l2_strength},
          {"learning_rate", svm.learning_rate},
          {"epochs", svm.epochs}}},
        {"forest",
         {{"tree_count", forest.tree_count},
          {"max_depth", forest.max_depth},
          {"min_leaf", forest.min_leaf},
          {"bootstrap", forest.bootstrap}}},
        {"encoder",
         {{"num_layers", encoder.num_layers},
          {"num_heads", encoder.num_heads},
          {"hidden_size", encoder.hidden_size},
          {"ffn_size", encoder.ffn_size},
          {"max_seq_len", encoder.max_seq_len},
          {"dropout_rate", encoder.dropout_rate},
          {"layer_norm_eps", encoder.layer_norm_eps}}},
        {"vocab_target", vocab_target},
        {"init_scheme", to_string(init_scheme)},
        {"pretrain",
         {{"mask_fraction", pretrain.mask_fraction},
          {"epochs", pretrain.epochs},
          {"batch_size", pretrain.batch_size},
          {"learning_rate", pretrain.learning_rate},
          {"warmup_fraction", pretrain.warmup_fraction}}},
        {"finetune",
         {{"batch_size", finetune.batch_size},
          {"learning_rate", finetune.learning_rate},
          {"epochs", finetune.epochs},
          {"warmup_fraction", finetune.warmup_fraction},
          {"select_on_validation", finetune.select_on_validation},
          {"freeze_top_n",
           finetune.freeze_top_n ? json(*finetune.freeze_top_n) : json(nullptr)}}},
        {"fetch",
         {{"page_limit", fetch.page_limit},
          {"retries", fetch.retries},
          {"parallel", fetch.parallel},
          {"doc_url_template", fetch.doc_url_template}}},
        {"eval", {{"folds", eval_folds}, {"holdout_per_class", holdout_per_class}}},
        {"synth",
         {{"per_class", synth.per_class},
          {"seed", synth.seed},
          {"keyword_rate", synth.keyword_rate},
          {"cross_keyword_rate", synth.cross_keyword_rate},
          {"other_keyword_rate", synth.other_keyword_rate}}},
    };
}

}  // namespace adme
