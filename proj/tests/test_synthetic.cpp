#include <doctest.h>

#include <map>

#include "adme/keyword_rules.hpp"
#include "adme/synthetic.hpp"

using namespace adme;

TEST_SUITE("synthetic") {

TEST_CASE("generator emits the requested per-class counts") {
    SyntheticSpec spec;
    spec.per_class = 420;
    auto corpus = generate_synthetic_corpus(spec);
    CHECK(corpus.size() == 420u * kNumTopics);
    std::map<Topic, int> counts;
    for (const auto& p : corpus) ++counts[p.topic];
    for (Topic t : kAllTopics) CHECK(counts[t] == 420);
}

TEST_CASE("sentences are non-empty, terminated paragraphs") {
    SyntheticSpec spec;
    spec.per_class = 50;
    for (const auto& p : generate_synthetic_corpus(spec)) {
        REQUIRE(!p.text.empty());
        CHECK(p.text.back() == '.');
        CHECK(p.source == LabelSource::Manual);
    }
}

TEST_CASE("generation is deterministic per seed") {
    SyntheticSpec spec;
    spec.per_class = 30;
    auto a = generate_synthetic_corpus(spec);
    auto b = generate_synthetic_corpus(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].text == b[i].text);

    spec.seed += 1;
    auto c = generate_synthetic_corpus(spec);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].text != c[i].text) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("keyword rates leave the rule baseline beatable but not hopeless") {
    SyntheticSpec spec;
    spec.per_class = 200;
    auto corpus = generate_synthetic_corpus(spec);
    KeywordTable table = default_keyword_table();
    int correct = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        if (rule_classify(corpus[i].text, table, i) == corpus[i].topic) ++correct;
    double accuracy = static_cast<double>(correct) / static_cast<double>(corpus.size());
    CHECK(accuracy > 0.30);
    CHECK(accuracy < 0.80);
}

}  // TEST_SUITE
