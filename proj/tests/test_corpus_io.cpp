#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "adme/corpus_io.hpp"
#include "adme/error.hpp"
#include "test_util.hpp"

using namespace adme;

TEST_SUITE("corpus_io") {

TEST_CASE("corpus records round-trip through JSONL") {
    std::vector<LabeledParagraph> records = {
        {"Uptake is rapid.", Topic::Absorption, LabelSource::RegexOutside, "SET-1", "NDA1",
         "absorption"},
        {"Cleared renally.", Topic::Excretion, LabelSource::RegexInline, "SET-1", "NDA1",
         "elimination"},
        {"Hand labeled paragraph.", Topic::Other, LabelSource::Manual, "", "", ""},
    };
    std::string path = (std::filesystem::temp_directory_path() / "adme_corpus_io.jsonl").string();
    write_corpus_jsonl(path, records);
    auto loaded = read_corpus_jsonl(path);
    REQUIRE(loaded.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(loaded[i].text == records[i].text);
        CHECK(loaded[i].topic == records[i].topic);
        CHECK(loaded[i].source == records[i].source);
        CHECK(loaded[i].raw_title == records[i].raw_title);
    }
    std::remove(path.c_str());
}

TEST_CASE("corrupt corpus record names the line") {
    std::string path = (std::filesystem::temp_directory_path() / "adme_corrupt.jsonl").string();
    {
        std::ofstream out(path);
        out << R"({"text": "fine.", "topic": "Other", "source": "manual"})" << "\n";
        out << "{garbage\n";
    }
    try {
        read_corpus_jsonl(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
    std::remove(path.c_str());
}

TEST_CASE("manifest round-trip") {
    std::vector<ManifestRecord> records = {
        {"SET-A", "NDA1", 4, 12},
        {"SET-B", "NDA2", 1, 0},
    };
    std::string path = (std::filesystem::temp_directory_path() / "adme_manifest.jsonl").string();
    write_manifest(path, records);
    auto loaded = read_manifest(path);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].set_id == "SET-A");
    CHECK(loaded[0].pk_paragraph_count == 12);
    CHECK(loaded[1].version == 1);
    std::remove(path.c_str());
}

}  // TEST_SUITE
