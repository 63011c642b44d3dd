#pragma once

#include <map>
#include <string>
#include <vector>

#include "adme/spl.hpp"

namespace adme {

struct FetchOptions {
    int page_limit = 0;  // 0 = all pages
    int retries = 3;     // attempts per page/document on transient failure
    int parallel = 4;    // ceiling for concurrent document fetches
    // Where documents live relative to the index endpoint; {set_id} is
    // substituted. Empty selects "<index dir>/spl/{set_id}.xml".
    std::string doc_url_template;
};

// Reads a paged label index from an http:// endpoint or a local JSON file.
// Pages chain through their "next_page" field. Entries are deduplicated on
// (set_id, version); the same set_id at different versions is kept.
std::vector<LabelIndexEntry> fetch_label_index(const std::string& endpoint_or_path,
                                               const FetchOptions& options = {});

// Fetches and parses the SPL documents named by the index entries, with at
// most options.parallel requests in flight. Local directories are read
// directly ("<dir>/<set_id>.xml").
std::map<std::string, SplDocument> fetch_documents(const std::string& endpoint_or_path,
                                                   const std::vector<LabelIndexEntry>& entries,
                                                   const FetchOptions& options = {});

// Parses every *.xml file in a directory, keyed by set_id.
std::map<std::string, SplDocument> load_spl_directory(const std::string& dir);

}  // namespace adme
