#include "adme/annotator.hpp"

#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>

#include "adme/error.hpp"
#include "adme/text.hpp"

namespace adme {

using nlohmann::json;

AnnotatorConfig AnnotatorConfig::defaults() {
    AnnotatorConfig config;
    config.titles = {
        {"absorption", Topic::Absorption},
        {"distribution", Topic::Distribution},
        {"metabolism", Topic::Metabolism},
        {"excretion", Topic::Excretion},
        {"elimination", Topic::Excretion},
        {"food effect", Topic::Absorption},
        {"bioavailability", Topic::Absorption},
    };
    return config;
}

std::optional<std::string> detect_outside_title(const RawSegment& segment,
                                                const AnnotatorConfig& config) {
    std::string text = to_lower(normalize_whitespace(segment.text));
    for (const TitleRule& rule : config.titles) {
        if (text == rule.title) return rule.title;
    }
    return std::nullopt;
}

std::optional<InlineTitle> detect_inline_title(std::string_view paragraph_text,
                                               const AnnotatorConfig& config) {
    // Longest title first so e.g. a hypothetical "absorption rate" beats
    // "absorption".
    const TitleRule* best = nullptr;
    for (const TitleRule& rule : config.titles) {
        if (!starts_with_ci(paragraph_text, rule.title)) continue;
        if (best == nullptr || rule.title.size() > best->title.size()) best = &rule;
    }
    if (best == nullptr) return std::nullopt;

    std::size_t pos = best->title.size();
    while (pos < paragraph_text.size() &&
           std::isspace(static_cast<unsigned char>(paragraph_text[pos])))
        ++pos;
    if (pos >= paragraph_text.size() ||
        (paragraph_text[pos] != ':' && paragraph_text[pos] != '-'))
        return std::nullopt;
    ++pos;
    while (pos < paragraph_text.size()) {
        char c = paragraph_text[pos];
        if (std::isspace(static_cast<unsigned char>(c)) || c == ':' || c == '-')
            ++pos;
        else
            break;
    }
    return InlineTitle{best->title, std::string(paragraph_text.substr(pos))};
}

Topic canonicalize_topic(std::string_view raw_title, const AnnotatorConfig& config) {
    std::string key = to_lower(normalize_whitespace(raw_title));
    for (const TitleRule& rule : config.titles) {
        if (key == rule.title) return rule.topic;
    }
    return Topic::Other;
}

Topic canonicalize_topic(std::string_view raw_title) {
    return canonicalize_topic(raw_title, AnnotatorConfig::defaults());
}

std::vector<LabeledParagraph> annotate_document(const std::vector<RawSegment>& segments,
                                                const AnnotatorConfig& config,
                                                const std::string& set_id,
                                                const std::string& application_number) {
    std::vector<LabeledParagraph> out;
    Topic current = Topic::Other;
    std::string current_title;

    for (const RawSegment& seg : segments) {
        if (auto title = detect_outside_title(seg, config)) {
            current = canonicalize_topic(*title, config);
            current_title = *title;
            continue;
        }
        if (seg.kind == TagKind::Title) {
            current = Topic::Other;
            current_title.clear();
            continue;
        }
        if (auto inl = detect_inline_title(seg.text, config)) {
            std::string text = config.strip_inline_title ? inl->remainder : seg.text;
            if (text.empty()) continue;
            LabeledParagraph p;
            p.text = std::move(text);
            p.topic = canonicalize_topic(inl->title, config);
            p.source = LabelSource::RegexInline;
            p.set_id = set_id;
            p.application_number = application_number;
            p.raw_title = inl->title;
            out.push_back(std::move(p));
        } else {
            LabeledParagraph p;
            p.text = seg.text;
            p.topic = current;
            p.source = LabelSource::RegexOutside;
            p.set_id = set_id;
            p.application_number = application_number;
            p.raw_title = current_title;
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::vector<LabeledParagraph> import_manual(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manual annotation file: " + path);

    std::vector<LabeledParagraph> out;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": malformed record: " + e.what());
        }
        std::string text = record.value("text", "");
        if (text.empty())
            throw ValidationError(path + ":" + std::to_string(line_no) + ": empty text");
        std::string topic_name = record.value("topic", "");
        auto topic = topic_from_string(topic_name);
        if (!topic)
            throw ValidationError(path + ":" + std::to_string(line_no) + ": unknown topic '" +
                                  topic_name + "' (manual files must use canonical topics)");
        LabeledParagraph p;
        p.text = std::move(text);
        p.topic = *topic;
        p.source = LabelSource::Manual;
        p.set_id = record.value("set_id", "");
        p.application_number = record.value("application_number", "");
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace adme
