#include <doctest.h>

#include "adme/encoder.hpp"
#include "adme/encoder_train.hpp"
#include "adme/error.hpp"
#include "adme/subword.hpp"

using namespace adme;

namespace {

EncoderConfig small_config(int vocab_size, int layers = 2) {
    EncoderConfig config;
    config.num_layers = layers;
    config.num_heads = 2;
    config.hidden_size = 16;
    config.ffn_size = 32;
    config.max_seq_len = 16;
    config.vocab_size = vocab_size;
    config.dropout_rate = 0.1;
    return config;
}

std::vector<std::string> toy_corpus() {
    std::vector<std::string> corpus;
    const char* patterns[] = {
        "alpha beta gamma", "beta gamma delta", "gamma delta alpha", "delta alpha beta",
        "alpha gamma beta", "delta beta alpha", "beta alpha delta", "gamma alpha delta",
    };
    for (int i = 0; i < 200; ++i) corpus.emplace_back(patterns[i % 8]);
    return corpus;
}

// Two classes fully determined by their vocabulary.
std::vector<LabeledParagraph> separable_text_set() {
    std::vector<LabeledParagraph> data;
    for (int i = 0; i < 12; ++i) {
        LabeledParagraph a;
        a.text = i % 2 == 0 ? "alpha alpha beta." : "beta alpha alpha.";
        a.topic = Topic::Absorption;
        data.push_back(a);
        LabeledParagraph d;
        d.text = i % 2 == 0 ? "gamma gamma delta." : "delta gamma gamma.";
        d.topic = Topic::Distribution;
        data.push_back(d);
    }
    return data;
}

bool group_bits_equal(EncoderParams& a, EncoderParams& b, int group) {
    auto ta = collect_tensors(a);
    auto tb = collect_tensors(b);
    for (std::size_t i = 0; i < ta.size(); ++i) {
        if (ta[i].group != group) continue;
        for (Eigen::Index j = 0; j < ta[i].size(); ++j)
            if (ta[i].data[j] != tb[i].data[j]) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("encoder_train") {

TEST_CASE("masked-LM pretraining lowers the loss on a 200-sentence corpus") {
    std::vector<std::string> corpus = toy_corpus();
    SubwordVocab vocab = train_subword_vocab(corpus, 60);
    EncoderParams params =
        init_params(small_config(vocab.size()), InitScheme::TruncatedNormal, 5);
    PretrainConfig config;
    config.epochs = 30;
    config.batch_size = 32;
    config.learning_rate = 5e-4;
    config.seed = 9;
    PretrainResult result = pretrain_mlm(params, vocab, corpus, config);
    REQUIRE(result.loss_history.size() == 30);
    CHECK(result.loss_history.back() < result.loss_history.front());
}

TEST_CASE("mask_fraction of zero is a configuration error") {
    std::vector<std::string> corpus = toy_corpus();
    SubwordVocab vocab = train_subword_vocab(corpus, 60);
    EncoderParams params =
        init_params(small_config(vocab.size()), InitScheme::TruncatedNormal, 5);
    PretrainConfig config;
    config.mask_fraction = 0.0;
    CHECK_THROWS_AS(pretrain_mlm(params, vocab, corpus, config), ConfigError);
    CHECK_THROWS_AS(pretrain_mlm(params, vocab, {}, PretrainConfig{}), TrainError);
}

TEST_CASE("fixed seed reproduces the loss history exactly") {
    std::vector<std::string> corpus = toy_corpus();
    corpus.resize(60);
    SubwordVocab vocab = train_subword_vocab(corpus, 60);
    PretrainConfig config;
    config.epochs = 3;
    config.seed = 123;
    EncoderParams a = init_params(small_config(vocab.size()), InitScheme::TruncatedNormal, 5);
    EncoderParams b = init_params(small_config(vocab.size()), InitScheme::TruncatedNormal, 5);
    PretrainResult ra = pretrain_mlm(a, vocab, corpus, config);
    PretrainResult rb = pretrain_mlm(b, vocab, corpus, config);
    CHECK(ra.loss_history == rb.loss_history);
    for (int g = 0; g < a.num_groups(); ++g) CHECK(group_bits_equal(a, b, g));
}

TEST_CASE("head-only fine-tuning changes nothing but the classifier head") {
    auto data = separable_text_set();
    std::vector<std::string> texts;
    for (const auto& p : data) texts.push_back(p.text);
    SubwordVocab vocab = train_subword_vocab(texts, 60);
    EncoderParams params =
        init_params(small_config(vocab.size(), 4), InitScheme::TruncatedNormal, 15);
    EncoderParams before = params;
    FinetuneConfig config;
    config.epochs = 3;
    config.batch_size = 8;
    config.learning_rate = 1e-3;
    config.freeze_top_n = 0;
    config.select_on_validation = false;
    finetune(params, vocab, data, {}, config);
    for (int g = 0; g < params.num_groups(); ++g) {
        if (g == params.classifier_group())
            CHECK(!group_bits_equal(params, before, g));
        else
            CHECK(group_bits_equal(params, before, g));
    }
}

TEST_CASE("top-1 fine-tuning on L=4 keeps layers 1-3 and embeddings bit-identical") {
    auto data = separable_text_set();
    std::vector<std::string> texts;
    for (const auto& p : data) texts.push_back(p.text);
    SubwordVocab vocab = train_subword_vocab(texts, 60);
    EncoderParams params =
        init_params(small_config(vocab.size(), 4), InitScheme::TruncatedNormal, 16);
    EncoderParams before = params;
    FinetuneConfig config;
    config.epochs = 2;
    config.batch_size = 8;
    config.learning_rate = 1e-3;
    config.freeze_top_n = 1;
    config.select_on_validation = false;
    finetune(params, vocab, data, {}, config);
    CHECK(group_bits_equal(params, before, 0));  // embeddings
    CHECK(group_bits_equal(params, before, 1));
    CHECK(group_bits_equal(params, before, 2));
    CHECK(group_bits_equal(params, before, 3));
    CHECK(!group_bits_equal(params, before, 4));  // top layer

    SUBCASE("freeze deeper than the stack is rejected") {
        FinetuneConfig bad = config;
        bad.freeze_top_n = 5;
        CHECK_THROWS_AS(finetune(params, vocab, data, {}, bad), ConfigError);
    }
}

TEST_CASE("a separable two-class text set trains to accuracy 1.0 within 50 epochs") {
    auto data = separable_text_set();
    std::vector<std::string> texts;
    for (const auto& p : data) texts.push_back(p.text);
    SubwordVocab vocab = train_subword_vocab(texts, 60);
    EncoderParams params =
        init_params(small_config(vocab.size()), InitScheme::TruncatedNormal, 17);
    FinetuneConfig config;
    config.epochs = 50;
    config.batch_size = 8;
    config.learning_rate = 3e-3;
    config.select_on_validation = false;
    config.seed = 4;
    finetune(params, vocab, data, {}, config);
    int correct = 0;
    for (const auto& p : data)
        if (classify(params, vocab, p.text) == p.topic) ++correct;
    CHECK(correct == static_cast<int>(data.size()));
}

TEST_CASE("validation selection restores the best checkpoint") {
    auto data = separable_text_set();
    std::vector<LabeledParagraph> train(data.begin(), data.begin() + 16);
    std::vector<LabeledParagraph> val(data.begin() + 16, data.end());
    std::vector<std::string> texts;
    for (const auto& p : data) texts.push_back(p.text);
    SubwordVocab vocab = train_subword_vocab(texts, 60);
    EncoderParams params =
        init_params(small_config(vocab.size()), InitScheme::TruncatedNormal, 18);
    FinetuneConfig config;
    config.epochs = 8;
    config.batch_size = 8;
    config.learning_rate = 3e-3;
    config.seed = 5;
    FinetuneResult result = finetune(params, vocab, train, val, config);
    REQUIRE(result.val_f1_history.size() == 8);
    CHECK(result.best_epoch >= 0);
    double best = *std::max_element(result.val_f1_history.begin(), result.val_f1_history.end());
    CHECK(result.val_f1_history[static_cast<std::size_t>(result.best_epoch)] == best);
}

TEST_CASE("grid_search") {
    SUBCASE("a 1x1 grid returns its only cell") {
        GridResult result = grid_search({16}, {1e-4}, [](int, double) { return 0.7; });
        REQUIRE(result.cells.size() == 1);
        CHECK(result.best_batch == 16);
        CHECK(result.best_lr == 1e-4);
    }
    SUBCASE("a poisoned cell is never selected over a better one") {
        GridResult result = grid_search({16, 32}, {1e-4}, [](int batch, double) {
            return batch == 16 ? 0.05 : 0.9;  // batch 16 plays the always-Other stub
        });
        CHECK(result.best_batch == 32);
    }
    SUBCASE("the default 4x4 grid records 16 cells") {
        int calls = 0;
        GridResult result = grid_search(kDefaultBatchGrid, kDefaultLrGrid, [&](int, double) {
            return 0.5 + 0.001 * static_cast<double>(++calls);
        });
        CHECK(result.cells.size() == 16);
    }
    SUBCASE("ties prefer larger batch then smaller learning rate") {
        GridResult result = grid_search({16, 32}, {1e-5, 1e-4}, [](int, double) { return 0.5; });
        CHECK(result.best_batch == 32);
        CHECK(result.best_lr == 1e-5);
    }
}

}  // TEST_SUITE
