#include <doctest.h>

#include <algorithm>

#include "adme/error.hpp"
#include "adme/spl.hpp"
#include "test_util.hpp"

using namespace adme;

TEST_SUITE("spl") {

TEST_CASE("parse_spl reads the outside-title fixture") {
    SplDocument doc = parse_spl(read_fixture("spl/SET-A1A.xml"));
    CHECK(doc.set_id == "SET-A1A");
    CHECK(doc.application_number == "NDA208400");
    CHECK(doc.version == 4);
    REQUIRE(doc.sections.size() == 2);
    CHECK(doc.sections[0].code == kPkLoinc);

    const auto& segments = doc.sections[0].segments;
    REQUIRE(segments.size() == 8);
    CHECK(segments[0].kind == TagKind::Title);
    CHECK(segments[0].text == "Absorption");
    CHECK(segments[1].kind == TagKind::Paragraph);
    CHECK(segments[1].text ==
          "In pediatric patients with ALL, oral absorption of methotrexate appears to be dose "
          "dependent.");
    CHECK(segments[6].text == "Excretion");
}

TEST_CASE("parse_spl errors carry position on malformed XML") {
    CHECK_THROWS_AS(parse_spl("<document><setId root=\"x\"/>"), ParseError);
    try {
        parse_spl("not xml at all");
    } catch (const ParseError& e) {
        CHECK(e.byte_offset() >= 0);
    }
}

TEST_CASE("parse_spl requires a document id") {
    CHECK_THROWS_AS(parse_spl("<document><versionNumber value=\"1\"/></document>"), ParseError);
}

TEST_CASE("extract_pk_section") {
    SUBCASE("outside-title fixture returns 8 segments, 4 titles + 4 paragraphs") {
        SplDocument doc = parse_spl(read_fixture("spl/SET-A1A.xml"));
        auto segments = extract_pk_section(doc);
        REQUIRE(segments.size() == 8);
        int titles = 0, paragraphs = 0;
        for (const auto& s : segments) {
            if (s.kind == TagKind::Title) ++titles;
            if (s.kind == TagKind::Paragraph) ++paragraphs;
        }
        CHECK(titles == 4);
        CHECK(paragraphs == 4);
    }
    SUBCASE("missing pharmacokinetics section yields an empty list") {
        SplDocument doc = parse_spl(read_fixture("spl/SET-NOPK.xml"));
        CHECK(extract_pk_section(doc).empty());
        CHECK(std::none_of(doc.sections.begin(), doc.sections.end(),
                           [](const SplSection& s) { return s.code == kPkLoinc; }));
    }
    SUBCASE("duplicate pharmacokinetics sections concatenate in document order") {
        SplDocument doc = parse_spl(read_fixture("spl/SET-DUPPK.xml"));
        auto segments = extract_pk_section(doc);
        REQUIRE(segments.size() == 4);
        CHECK(segments[0].text == "Absorption");
        CHECK(segments[2].text == "Excretion");
        CHECK(segments[3].text == "Excretion occurs mainly in urine.");
    }
}

TEST_CASE("nested list items flatten in document order") {
    SplDocument doc = parse_spl(read_fixture("spl/SET-NESTED.xml"));
    auto segments = extract_pk_section(doc);
    // Hand-enumerated: outer item text precedes its nested item's text.
    REQUIRE(segments.size() == 4);
    CHECK(segments[0].text == "Intro paragraph.");
    CHECK(segments[1].text == "First item text.");
    CHECK(segments[1].kind == TagKind::Item);
    CHECK(segments[2].text == "Outer item start outer item end.");
    CHECK(segments[3].text == "Inner nested item.");
}

TEST_CASE("segment texts never invent non-whitespace characters") {
    // Every segment's non-whitespace text must appear, in order, in the raw
    // XML stream.
    for (const char* name : {"spl/SET-A1A.xml", "spl/SET-A1B-V7.xml", "spl/SET-NESTED.xml"}) {
        std::string raw = read_fixture(name);
        SplDocument doc = parse_spl(raw);
        for (const auto& section : doc.sections) {
            for (const auto& segment : section.segments) {
                std::size_t cursor = 0;
                for (char c : segment.text) {
                    if (c == ' ') continue;
                    cursor = raw.find(c, cursor);
                    REQUIRE(cursor != std::string::npos);
                    ++cursor;
                }
            }
        }
    }
}

TEST_CASE("segment_paragraphs") {
    SUBCASE("titles and terminated paragraphs pass through") {
        std::vector<RawSegment> in = {
            {TagKind::Title, "Absorption"},
            {TagKind::Paragraph, "Oral absorption appears dose dependent."},
        };
        auto out = segment_paragraphs(in);
        REQUIRE(out.size() == 2);
        CHECK(out[0].text == "Absorption");
        CHECK(out[1].text == "Oral absorption appears dose dependent.");
    }
    SUBCASE("unterminated fragments merge into the next non-title segment") {
        std::vector<RawSegment> in = {
            {TagKind::Paragraph, "See Table 1"},
            {TagKind::Paragraph, "Values are mean."},
        };
        auto out = segment_paragraphs(in);
        REQUIRE(out.size() == 1);
        CHECK(out[0].text == "See Table 1 Values are mean.");
    }
    SUBCASE("empty input gives empty output") {
        CHECK(segment_paragraphs({}).empty());
    }
    SUBCASE("a trailing unterminated fragment is kept as-is, kind included") {
        std::vector<RawSegment> in = {{TagKind::Item, "See Table 1"}};
        auto out = segment_paragraphs(in);
        REQUIRE(out.size() == 1);
        CHECK(out[0].text == "See Table 1");
        CHECK(out[0].kind == TagKind::Item);
    }
    SUBCASE("every output paragraph ends with '.' or is a title") {
        std::vector<RawSegment> in = {
            {TagKind::Title, "Distribution"},   {TagKind::Paragraph, "Fragment one"},
            {TagKind::Item, "fragment two"},    {TagKind::Item, "the end."},
            {TagKind::Paragraph, "Complete sentence."},
        };
        auto out = segment_paragraphs(in);
        for (const auto& s : out) {
            bool ok = s.kind == TagKind::Title || (!s.text.empty() && s.text.back() == '.');
            CHECK(ok);
        }
        REQUIRE(out.size() == 3);
        CHECK(out[1].text == "Fragment one fragment two the end.");
    }
}

TEST_CASE("select_labels") {
    std::map<std::string, SplDocument> docs;
    for (const char* name :
         {"SET-A1A", "SET-A1B-V7", "SET-A1B-V3", "SET-ANDA", "SET-NOPK", "SET-UNTITLED"}) {
        SplDocument doc = parse_spl(read_fixture(std::string("spl/") + name + ".xml"));
        docs.emplace(doc.set_id, std::move(doc));
    }
    std::vector<LabelIndexEntry> entries;
    for (const auto& [set_id, doc] : docs)
        entries.push_back({set_id, doc.application_number, doc.version, ""});

    auto selected = select_labels(entries, docs);

    SUBCASE("latest version per application number survives") {
        int nda017963 = 0;
        for (const auto& doc : selected) {
            if (doc.application_number == "NDA017963") {
                ++nda017963;
                CHECK(doc.version == 7);
            }
        }
        CHECK(nda017963 == 1);
    }
    SUBCASE("ANDA and missing-PK documents are dropped") {
        for (const auto& doc : selected) {
            CHECK(doc.application_number.rfind("NDA", 0) == 0);
            CHECK(!extract_pk_section(doc).empty());
        }
        CHECK(selected.size() == 3);  // A1A, A1B (v7), UNTITLED
    }
    SUBCASE("application numbers are unique and selection is idempotent") {
        std::vector<LabelIndexEntry> selected_entries;
        std::map<std::string, SplDocument> selected_docs;
        for (const auto& doc : selected) {
            selected_entries.push_back({doc.set_id, doc.application_number, doc.version, ""});
            selected_docs.emplace(doc.set_id, doc);
        }
        auto twice = select_labels(selected_entries, selected_docs);
        REQUIRE(twice.size() == selected.size());
        for (std::size_t i = 0; i < twice.size(); ++i)
            CHECK(twice[i].set_id == selected[i].set_id);
    }
}

}  // TEST_SUITE
