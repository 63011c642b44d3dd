#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adme/spl.hpp"
#include "adme/types.hpp"

namespace adme {

// One detectable subsection title and the topic it canonicalizes to.
struct TitleRule {
    std::string title;  // lowercase
    Topic topic = Topic::Other;
};

struct AnnotatorConfig {
    std::vector<TitleRule> titles;
    // Drop the matched inline title from the paragraph text kept for training.
    bool strip_inline_title = true;

    static AnnotatorConfig defaults();
};

// Whole-segment title match (case-insensitive, anchored both ends). Returns
// the lowercased matched title.
std::optional<std::string> detect_outside_title(const RawSegment& segment,
                                                const AnnotatorConfig& config);

struct InlineTitle {
    std::string title;      // lowercased matched title
    std::string remainder;  // text after the ':'/'-' delimiter, left-trimmed
};

// Leading title followed by optional whitespace and ':' or '-'.
std::optional<InlineTitle> detect_inline_title(std::string_view paragraph_text,
                                               const AnnotatorConfig& config);

// elimination -> Excretion, food effect -> Absorption, canonical titles to
// themselves, everything else -> Other.
Topic canonicalize_topic(std::string_view raw_title, const AnnotatorConfig& config);
Topic canonicalize_topic(std::string_view raw_title);

// Walks segment_paragraphs output with a current-topic state (initially
// Other). Outside titles update the state and emit nothing; non-ADME titles
// reset it; inline-titled paragraphs are labeled by their own title.
std::vector<LabeledParagraph> annotate_document(const std::vector<RawSegment>& segments,
                                                const AnnotatorConfig& config,
                                                const std::string& set_id = "",
                                                const std::string& application_number = "");

// Line-delimited manual annotations ({text, topic} records, canonical topic
// names only). Throws ValidationError naming the offending line.
std::vector<LabeledParagraph> import_manual(const std::string& path);

}  // namespace adme
