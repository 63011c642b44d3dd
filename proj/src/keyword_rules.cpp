#include "adme/keyword_rules.hpp"

#include <cctype>
#include <set>

#include "adme/error.hpp"
#include "adme/rng.hpp"
#include "adme/text.hpp"

namespace adme {

void KeywordTable::validate() const {
    std::set<std::string> seen;
    for (std::size_t t = 0; t < keywords.size(); ++t) {
        if (keywords[t].empty())
            throw ValidationError(std::string("keyword table: empty list for topic ") +
                                  to_string(topic_at(static_cast<int>(t))));
        for (const std::string& kw : keywords[t]) {
            if (kw.empty()) throw ValidationError("keyword table: empty keyword");
            for (char c : kw) {
                if (std::isupper(static_cast<unsigned char>(c)))
                    throw ValidationError("keyword table: keywords must be lowercase: " + kw);
            }
            if (!seen.insert(kw).second)
                throw ValidationError("keyword table: '" + kw + "' appears under two topics");
        }
    }
}

KeywordTable default_keyword_table() {
    KeywordTable table;
    table.keywords[topic_index(Topic::Absorption)] = {"absorption", "absorb", "food"};
    table.keywords[topic_index(Topic::Distribution)] = {"distribution", "distribute"};
    table.keywords[topic_index(Topic::Metabolism)] = {"metabolism", "metabolize"};
    table.keywords[topic_index(Topic::Excretion)] = {"excretion", "elimination", "excrete",
                                                     "eliminate"};
    table.validate();
    return table;
}

Topic rule_classify(std::string_view text, const KeywordTable& table, std::uint64_t seed) {
    std::vector<std::string> tokens = tokenize_words(text);
    std::vector<Topic> matched;
    for (std::size_t t = 0; t < table.keywords.size(); ++t) {
        bool hit = false;
        for (const std::string& kw : table.keywords[t]) {
            for (const std::string& token : tokens) {
                if (token.size() >= kw.size() && token.compare(0, kw.size(), kw) == 0) {
                    hit = true;
                    break;
                }
            }
            if (hit) break;
        }
        if (hit) matched.push_back(topic_at(static_cast<int>(t)));
    }
    if (matched.empty()) return Topic::Other;
    if (matched.size() == 1) return matched.front();
    SplitMix64 rng(seed);
    return matched[rng.uniform_int(matched.size())];
}

}  // namespace adme
