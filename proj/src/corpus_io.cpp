#include "adme/corpus_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "adme/error.hpp"

namespace adme {

using nlohmann::json;

void write_corpus_jsonl(const std::string& path, const std::vector<LabeledParagraph>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write corpus file: " + path);
    long id = 0;
    for (const LabeledParagraph& p : records) {
        json record{
            {"id", id++},
            {"set_id", p.set_id},
            {"application_number", p.application_number},
            {"text", p.text},
            {"topic", to_string(p.topic)},
            {"source", to_string(p.source)},
        };
        if (p.source != LabelSource::Manual) record["raw_title"] = p.raw_title;
        out << record.dump() << '\n';
    }
}

std::vector<LabeledParagraph> read_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file: " + path);
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
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": malformed corpus record: " + e.what());
        }
        LabeledParagraph p;
        p.text = record.value("text", "");
        if (p.text.empty())
            throw ValidationError(path + ":" + std::to_string(line_no) + ": empty text");
        auto topic = topic_from_string(record.value("topic", ""));
        if (!topic)
            throw ValidationError(path + ":" + std::to_string(line_no) + ": unknown topic '" +
                                  record.value("topic", "") + "'");
        p.topic = *topic;
        auto source = label_source_from_string(record.value("source", "manual"));
        if (!source)
            throw ValidationError(path + ":" + std::to_string(line_no) + ": unknown source '" +
                                  record.value("source", "") + "'");
        p.source = *source;
        p.set_id = record.value("set_id", "");
        p.application_number = record.value("application_number", "");
        p.raw_title = record.value("raw_title", "");
        out.push_back(std::move(p));
    }
    return out;
}

void write_manifest(const std::string& path, const std::vector<ManifestRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest: " + path);
    for (const ManifestRecord& r : records) {
        json record{
            {"set_id", r.set_id},
            {"application_number", r.application_number},
            {"version", r.version},
            {"pk_paragraph_count", r.pk_paragraph_count},
        };
        out << record.dump() << '\n';
    }
}

std::vector<ManifestRecord> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    std::vector<ManifestRecord> out;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": malformed manifest record: " + e.what());
        }
        ManifestRecord r;
        r.set_id = record.value("set_id", "");
        r.application_number = record.value("application_number", "");
        r.version = record.value("version", 1);
        r.pk_paragraph_count = record.value("pk_paragraph_count", 0);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace adme
