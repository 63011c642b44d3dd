#pragma once

#include <string>
#include <vector>

#include "adme/types.hpp"

namespace adme {

struct ManifestRecord {
    std::string set_id;
    std::string application_number;
    int version = 1;
    int pk_paragraph_count = 0;
};

// Line-delimited UTF-8 records: {id, set_id, application_number, text, topic,
// source, raw_title}. Ids are assigned sequentially at write time.
void write_corpus_jsonl(const std::string& path, const std::vector<LabeledParagraph>& records);
std::vector<LabeledParagraph> read_corpus_jsonl(const std::string& path);

void write_manifest(const std::string& path, const std::vector<ManifestRecord>& records);
std::vector<ManifestRecord> read_manifest(const std::string& path);

}  // namespace adme
