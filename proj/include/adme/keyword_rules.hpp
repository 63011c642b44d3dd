#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "adme/types.hpp"

namespace adme {

// Per-topic keyword lists for the rule baseline (Other excluded). Keywords
// are lowercase and unique across topics.
struct KeywordTable {
    std::array<std::vector<std::string>, 4> keywords;  // indexed by topic A,D,M,E

    const std::vector<std::string>& for_topic(Topic t) const {
        return keywords.at(static_cast<std::size_t>(t));
    }
    // Throws ValidationError on empty lists, uppercase entries, or a keyword
    // listed under two topics.
    void validate() const;
};

KeywordTable default_keyword_table();

// A keyword matches when it is a prefix of some word token of the lowercased
// text. Zero matched topics -> Other; one -> that topic; several -> uniform
// choice driven by the splitmix64 stream seeded with `seed`.
Topic rule_classify(std::string_view text, const KeywordTable& table, std::uint64_t seed);

}  // namespace adme
