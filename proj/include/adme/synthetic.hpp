#pragma once

#include <cstdint>
#include <vector>

#include "adme/types.hpp"

namespace adme {

// Seeded generator for a desk-scale benchmark corpus. Each class owns a pool
// of latent indicator stems (inflected with suffixes so subword models can
// generalize across surface forms) plus a small family of rule-detectable
// keywords; sentences mix indicators into shared filler vocabulary. Keyword
// rates control how often the rule baseline can fire, including cross-class
// and Other-class distractors.
struct SyntheticSpec {
    int per_class = 500;
    std::uint64_t seed = 20210818;
    double keyword_rate = 0.45;        // own-class keyword appears in a sentence
    double cross_keyword_rate = 0.15;  // keyword of a different class appears
    double other_keyword_rate = 0.25;  // ADME keyword inside an Other sentence
    int min_indicators = 2;
    int max_indicators = 4;
    int min_fillers = 5;
    int max_fillers = 9;
};

std::vector<LabeledParagraph> generate_synthetic_corpus(const SyntheticSpec& spec);

}  // namespace adme
