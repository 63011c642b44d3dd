#include "adme/types.hpp"

namespace adme {

const char* to_string(Topic topic) {
    switch (topic) {
        case Topic::Absorption: return "Absorption";
        case Topic::Distribution: return "Distribution";
        case Topic::Metabolism: return "Metabolism";
        case Topic::Excretion: return "Excretion";
        case Topic::Other: return "Other";
    }
    return "Other";
}

std::optional<Topic> topic_from_string(std::string_view name) {
    for (Topic t : kAllTopics) {
        if (name == to_string(t)) return t;
    }
    return std::nullopt;
}

const char* to_string(LabelSource source) {
    switch (source) {
        case LabelSource::RegexOutside: return "regex_outside";
        case LabelSource::RegexInline: return "regex_inline";
        case LabelSource::Manual: return "manual";
    }
    return "manual";
}

std::optional<LabelSource> label_source_from_string(std::string_view name) {
    if (name == "regex_outside") return LabelSource::RegexOutside;
    if (name == "regex_inline") return LabelSource::RegexInline;
    if (name == "manual") return LabelSource::Manual;
    return std::nullopt;
}

}  // namespace adme
