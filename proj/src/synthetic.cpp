#include "adme/synthetic.hpp"

#include <array>
#include <string>

#include "adme/error.hpp"
#include "adme/rng.hpp"

namespace adme {

namespace {

const std::vector<std::string> kFillers = {
    "the",        "of",        "in",        "a",         "to",        "was",
    "were",       "is",        "are",       "and",       "with",      "after",
    "following",  "patients",  "subjects",  "dose",      "doses",     "study",
    "studies",    "plasma",    "approximately", "mean",  "single",    "daily",
    "observed",   "reported",  "clinical",  "data",      "mg",        "levels",
    "values",     "rate",      "ratio",     "increase",  "decrease",  "healthy",
    "adult",      "oral",      "administration", "treatment", "drug", "product",
    "tablet",     "solution",  "concentration", "concentrations", "time", "hours",
    "days",       "range",     "between",   "within",    "volunteers", "male",
    "female",     "steady",    "state",     "exposure",  "respectively", "overall",
};

// Latent indicator stems per class; none of them trips the rule baseline's
// keyword table.
const std::array<std::vector<std::string>, 5> kStems = {{
    // Absorption
    {"bioavail", "ingest", "gastric", "intestin", "perme", "dissolut", "uptake", "luminal",
     "fasted", "portal", "duoden", "mucosal", "enteral", "jejun", "villus", "transcellular",
     "micell", "solubil", "chyme", "peroral"},
    // Distribution
    {"compartment", "tissue", "bind", "albumin", "barrier", "penetr", "partition", "diffus",
     "vascular", "placent", "sequester", "localiz", "perfus", "interstiti", "lipophil",
     "myocard", "synovi", "adipos", "glycoprotein", "unbound"},
    // Metabolism
    {"hepatic", "cyp", "enzym", "oxidat", "conjugat", "glucuronid", "hydroxyl", "demethyl",
     "biotransform", "microsom", "catalyz", "inactiv", "acetylat", "sulfat", "esteras",
     "isoform", "epoxid", "dealkylat", "reduct", "methylat"},
    // Excretion
    {"renal", "urin", "clearance", "fecal", "biliary", "kidney", "glomerul", "tubular",
     "unchanged", "dialysis", "cleared", "halflife", "nephron", "filtrat", "secretor",
     "reabsorb", "bladder", "micturit", "creatinin", "voided"},
    // Other
    {"interaction", "coadminist", "warfarin", "digoxin", "inhibitor", "impair", "elderly",
     "gender", "race", "pregnan", "lactat", "genotype", "pediatr", "geriatr", "smoker",
     "ethnic", "cirrhos", "insuffic", "polymorphism", "contraindicat"},
}};

const std::vector<std::string> kSuffixes = {"", "s", "ed", "ing", "al", "ive"};

// Surface forms the rule baseline's prefix matcher can detect.
const std::array<std::vector<std::string>, 4> kKeywordFamilies = {{
    {"absorption", "absorbed", "absorbs", "absorbing", "food"},
    {"distribution", "distributed", "distributes", "distributing"},
    {"metabolism", "metabolized", "metabolizes", "metabolizing"},
    {"excretion", "excreted", "elimination", "eliminated", "excretes", "eliminates"},
}};

std::string pick(const std::vector<std::string>& pool, SplitMix64& rng) {
    return pool[rng.uniform_int(pool.size())];
}

std::string inflected_stem(int class_index, SplitMix64& rng) {
    const std::vector<std::string>& stems = kStems[static_cast<std::size_t>(class_index)];
    return pick(stems, rng) + pick(kSuffixes, rng);
}

std::string make_sentence(int class_index, const SyntheticSpec& spec, SplitMix64& rng) {
    std::vector<std::string> words;
    const int fillers = spec.min_fillers +
                        static_cast<int>(rng.uniform_int(
                            static_cast<std::uint64_t>(spec.max_fillers - spec.min_fillers + 1)));
    for (int i = 0; i < fillers; ++i) words.push_back(pick(kFillers, rng));

    const int indicators =
        spec.min_indicators + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(
                                  spec.max_indicators - spec.min_indicators + 1)));
    for (int i = 0; i < indicators; ++i) words.push_back(inflected_stem(class_index, rng));

    if (class_index < 4) {
        if (rng.uniform() < spec.keyword_rate)
            words.push_back(pick(kKeywordFamilies[static_cast<std::size_t>(class_index)], rng));
        if (rng.uniform() < spec.cross_keyword_rate) {
            int other = static_cast<int>(rng.uniform_int(3));
            if (other >= class_index) ++other;
            if (other < 4)
                words.push_back(pick(kKeywordFamilies[static_cast<std::size_t>(other)], rng));
        }
    } else if (rng.uniform() < spec.other_keyword_rate) {
        int cls = static_cast<int>(rng.uniform_int(4));
        words.push_back(pick(kKeywordFamilies[static_cast<std::size_t>(cls)], rng));
    }

    shuffle(words, rng);
    std::string text;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) text += ' ';
        text += words[i];
    }
    if (!text.empty()) text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    text += '.';
    return text;
}

}  // namespace

std::vector<LabeledParagraph> generate_synthetic_corpus(const SyntheticSpec& spec) {
    if (spec.per_class < 1) throw ConfigError("synthetic corpus: per_class must be >= 1");
    if (spec.min_indicators < 1 || spec.max_indicators < spec.min_indicators ||
        spec.min_fillers < 1 || spec.max_fillers < spec.min_fillers)
        throw ConfigError("synthetic corpus: invalid sentence shape bounds");

    std::vector<LabeledParagraph> corpus;
    corpus.reserve(static_cast<std::size_t>(spec.per_class) * kNumTopics);
    for (int cls = 0; cls < kNumTopics; ++cls) {
        SplitMix64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(cls)));
        for (int i = 0; i < spec.per_class; ++i) {
            LabeledParagraph p;
            p.text = make_sentence(cls, spec, rng);
            p.topic = topic_at(cls);
            p.source = LabelSource::Manual;
            p.set_id = "synthetic";
            corpus.push_back(std::move(p));
        }
    }
    return corpus;
}

}  // namespace adme
