#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace adme {

inline constexpr const char* kPkLoinc = "43682-4";

enum class TagKind : int { Title = 0, Paragraph = 1, Item = 2 };

const char* to_string(TagKind kind);

// Smallest text unit identifiable by SPL tags, whitespace-normalized.
struct RawSegment {
    TagKind kind = TagKind::Paragraph;
    std::string text;
};

struct SplSection {
    std::string code;  // LOINC code of the section
    std::vector<RawSegment> segments;
};

// Parsed drug label. Sections keep document order; duplicate codes may occur.
struct SplDocument {
    std::string set_id;
    std::string application_number;  // empty when the label carries none
    int version = 1;
    std::vector<SplSection> sections;
};

struct LabelIndexEntry {
    std::string set_id;
    std::string application_number;
    int version = 1;
    std::string published;  // ISO date, informational only
};

// Parses an SPL XML document. Throws ParseError (with byte offset) on
// malformed XML or a missing setId.
SplDocument parse_spl(std::string_view xml);

// Segments of every "43682-4" section, concatenated in document order.
// Empty when the document has no pharmacokinetics section.
std::vector<RawSegment> extract_pk_section(const SplDocument& doc);

// Titles pass through. Paragraph/item segments whose text does not end with
// '.' are merged forward into the next non-title segment; a trailing
// unterminated fragment is kept as-is.
std::vector<RawSegment> segment_paragraphs(const std::vector<RawSegment>& segments);

// Keeps NDA-numbered documents, the highest version per application number,
// and only documents with a non-empty pharmacokinetics section.
std::vector<SplDocument> select_labels(const std::vector<LabelIndexEntry>& entries,
                                       const std::map<std::string, SplDocument>& docs);

}  // namespace adme
