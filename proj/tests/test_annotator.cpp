#include <doctest.h>

#include "adme/annotator.hpp"
#include "adme/error.hpp"
#include "adme/spl.hpp"
#include "test_util.hpp"

using namespace adme;

namespace {
const AnnotatorConfig kConfig = AnnotatorConfig::defaults();

std::vector<RawSegment> pk_paragraphs(const char* fixture) {
    SplDocument doc = parse_spl(read_fixture(fixture));
    return segment_paragraphs(extract_pk_section(doc));
}
}  // namespace

TEST_SUITE("annotator") {

TEST_CASE("detect_outside_title") {
    CHECK(detect_outside_title({TagKind::Title, "Absorption"}, kConfig) == "absorption");
    CHECK(detect_outside_title({TagKind::Title, "  ELIMINATION  "}, kConfig) == "elimination");
    CHECK(detect_outside_title({TagKind::Title, "Food Effect"}, kConfig) == "food effect");
    CHECK(!detect_outside_title({TagKind::Title, "Specific Populations"}, kConfig));
    CHECK(!detect_outside_title(
        {TagKind::Paragraph, "absorption of methotrexate appears dose dependent."}, kConfig));
    // Numbered titles stay unmatched; they canonicalize to Other downstream.
    CHECK(!detect_outside_title({TagKind::Title, "A. Absorption"}, kConfig));
    CHECK(!detect_outside_title({TagKind::Title, "Absorption and Distribution"}, kConfig));
}

TEST_CASE("detect_inline_title") {
    SUBCASE("matches a leading title with ':' and strips the delimiter") {
        auto m = detect_inline_title(
            "Distribution: Paroxetine distributes throughout the body, including the CNS.",
            kConfig);
        REQUIRE(m.has_value());
        CHECK(m->title == "distribution");
        CHECK(m->remainder ==
              "Paroxetine distributes throughout the body, including the CNS.");
    }
    SUBCASE("matches '-' delimiter and elimination title") {
        auto m = detect_inline_title("Elimination - Elimination of Lopressor is mainly by "
                                     "biotransformation in the liver.",
                                     kConfig);
        REQUIRE(m.has_value());
        CHECK(m->title == "elimination");
        CHECK(m->remainder == "Elimination of Lopressor is mainly by biotransformation in the "
                              "liver.");
    }
    SUBCASE("no match without a leading title") {
        CHECK(!detect_inline_title("In pediatric patients with ALL, oral absorption appears "
                                   "dose dependent.",
                                   kConfig));
        CHECK(!detect_inline_title("Absorption appears dose dependent.", kConfig));
    }
    SUBCASE("remainder never begins with whitespace, ':' or '-'") {
        auto m = detect_inline_title("Absorption:- : rapid uptake.", kConfig);
        REQUIRE(m.has_value());
        CHECK(m->remainder == "rapid uptake.");
    }
}

TEST_CASE("canonicalize_topic") {
    CHECK(canonicalize_topic("elimination") == Topic::Excretion);
    CHECK(canonicalize_topic("food effect") == Topic::Absorption);
    CHECK(canonicalize_topic("bioavailability") == Topic::Absorption);
    CHECK(canonicalize_topic("absorption") == Topic::Absorption);
    CHECK(canonicalize_topic("distribution") == Topic::Distribution);
    CHECK(canonicalize_topic("metabolism") == Topic::Metabolism);
    CHECK(canonicalize_topic("excretion") == Topic::Excretion);
    CHECK(canonicalize_topic("absorption and bioavailability") == Topic::Other);
    CHECK(canonicalize_topic("a. absorption") == Topic::Other);
}

TEST_CASE("annotate_document labels the outside-title fixture") {
    auto labeled = annotate_document(pk_paragraphs("spl/SET-A1A.xml"), kConfig, "SET-A1A",
                                     "NDA208400");
    REQUIRE(labeled.size() == 4);
    CHECK(labeled[0].topic == Topic::Absorption);
    CHECK(labeled[1].topic == Topic::Distribution);
    CHECK(labeled[2].topic == Topic::Metabolism);
    CHECK(labeled[3].topic == Topic::Excretion);
    for (const auto& p : labeled) {
        CHECK(p.source == LabelSource::RegexOutside);
        CHECK(!p.text.empty());
        CHECK(p.set_id == "SET-A1A");
    }
    CHECK(labeled[0].raw_title == "absorption");
}

TEST_CASE("annotate_document labels the inline-title fixture") {
    auto labeled = annotate_document(pk_paragraphs("spl/SET-A1B-V7.xml"), kConfig);
    REQUIRE(labeled.size() == 4);
    CHECK(labeled[0].topic == Topic::Absorption);
    CHECK(labeled[1].topic == Topic::Distribution);
    CHECK(labeled[2].topic == Topic::Metabolism);
    CHECK(labeled[3].topic == Topic::Excretion);  // "Elimination" canonicalized
    for (const auto& p : labeled) CHECK(p.source == LabelSource::RegexInline);
    CHECK(labeled[3].raw_title == "elimination");
    // Inline titles are stripped from the retained text by default.
    CHECK(labeled[0].text.rfind("The estimated oral bioavailability", 0) == 0);
}

TEST_CASE("annotate_document keeps the full text when stripping is disabled") {
    AnnotatorConfig config = AnnotatorConfig::defaults();
    config.strip_inline_title = false;
    auto labeled = annotate_document(pk_paragraphs("spl/SET-A1B-V7.xml"), config);
    REQUIRE(labeled.size() == 4);
    CHECK(labeled[0].text.rfind("Absorption:", 0) == 0);
}

TEST_CASE("paragraphs with no titles anywhere are labeled Other") {
    auto labeled = annotate_document(pk_paragraphs("spl/SET-UNTITLED.xml"), kConfig);
    REQUIRE(labeled.size() == 3);
    for (const auto& p : labeled) {
        CHECK(p.topic == Topic::Other);
        CHECK(p.source == LabelSource::RegexOutside);
        CHECK(p.raw_title.empty());
    }
}

TEST_CASE("non-ADME outside titles reset the state to Other") {
    std::vector<RawSegment> segments = {
        {TagKind::Title, "Absorption"},
        {TagKind::Paragraph, "Uptake is rapid."},
        {TagKind::Title, "Specific Populations"},
        {TagKind::Paragraph, "No adjustment is needed in the elderly."},
    };
    auto labeled = annotate_document(segments, kConfig);
    REQUIRE(labeled.size() == 2);
    CHECK(labeled[0].topic == Topic::Absorption);
    CHECK(labeled[1].topic == Topic::Other);
}

TEST_CASE("concatenating documents matches per-document annotation when the first ends with a "
          "non-ADME title") {
    std::vector<RawSegment> doc1 = {
        {TagKind::Title, "Metabolism"},
        {TagKind::Paragraph, "Metabolized by CYP2D6."},
        {TagKind::Title, "Drug Interaction Studies"},
    };
    std::vector<RawSegment> doc2 = {
        {TagKind::Paragraph, "Interaction studies were negative."},
        {TagKind::Title, "Excretion"},
        {TagKind::Paragraph, "Cleared renally."},
    };
    auto separate = annotate_document(doc1, kConfig);
    auto doc2_labels = annotate_document(doc2, kConfig);
    separate.insert(separate.end(), doc2_labels.begin(), doc2_labels.end());

    std::vector<RawSegment> joined = doc1;
    joined.insert(joined.end(), doc2.begin(), doc2.end());
    auto combined = annotate_document(joined, kConfig);

    REQUIRE(combined.size() == separate.size());
    for (std::size_t i = 0; i < combined.size(); ++i) {
        CHECK(combined[i].topic == separate[i].topic);
        CHECK(combined[i].text == separate[i].text);
    }
}

TEST_CASE("annotation is deterministic") {
    auto segments = pk_paragraphs("spl/SET-A1B-V7.xml");
    auto a = annotate_document(segments, kConfig);
    auto b = annotate_document(segments, kConfig);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].topic == b[i].topic);
}

TEST_CASE("import_manual") {
    SUBCASE("reads five records with manual source") {
        auto records = import_manual(fixture_path("manual_fixture.jsonl"));
        REQUIRE(records.size() == 5);
        CHECK(records[1].topic == Topic::Distribution);
        for (const auto& r : records) {
            CHECK(r.source == LabelSource::Manual);
            CHECK(r.raw_title.empty());
        }
    }
    SUBCASE("non-canonical topic names the line") {
        try {
            import_manual(fixture_path("manual_bad_topic.jsonl"));
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            std::string what = e.what();
            CHECK(what.find(":2") != std::string::npos);
            CHECK(what.find("Elimination") != std::string::npos);
        }
    }
}

}  // TEST_SUITE
