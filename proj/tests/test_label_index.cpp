#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "adme/error.hpp"
#include "adme/label_index.hpp"
#include "test_util.hpp"

using namespace adme;

TEST_SUITE("label_index") {

TEST_CASE("local index file with 3 entries returns 3 entries") {
    auto entries = fetch_label_index(fixture_path("index/index_page1.json"), {.page_limit = 1});
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].set_id == "SET-A1A");
    CHECK(entries[0].application_number == "NDA208400");
    CHECK(entries[0].version == 4);
}

TEST_CASE("duplicate set_id at different versions are both returned") {
    auto entries = fetch_label_index(fixture_path("index/index_dupes.json"));
    REQUIRE(entries.size() == 2);  // exact (set_id, version) duplicates collapse
    CHECK(entries[0].version == 2);
    CHECK(entries[1].version == 5);
}

TEST_CASE("page_limit=1 on a 2-page index returns only the first page") {
    auto one_page = fetch_label_index(fixture_path("index/index_page1.json"), {.page_limit = 1});
    CHECK(one_page.size() == 3);
    auto all = fetch_label_index(fixture_path("index/index_page1.json"));
    CHECK(all.size() == 6);  // pages chain through next_page
}

TEST_CASE("malformed index payload raises a parse error with byte offset") {
    try {
        fetch_label_index(fixture_path("index/index_bad.json"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.byte_offset() >= 0);
    }
}

TEST_CASE("missing index file raises an ingestion error carrying the cursor") {
    try {
        fetch_label_index(fixture_path("index/never_existed.json"));
        FAIL("expected IngestError");
    } catch (const IngestError& e) {
        CHECK(e.cursor().find("never_existed") != std::string::npos);
    }
}

TEST_CASE("http fetching pages, retries transient failures, and fetches documents") {
    httplib::Server server;
    std::atomic<int> page1_attempts{0};

    server.Get("/index.json", [&](const httplib::Request&, httplib::Response& res) {
        // First attempt fails so the retry path is exercised.
        if (page1_attempts.fetch_add(1) == 0) {
            res.status = 500;
            return;
        }
        res.set_content(read_fixture("index/index_page1.json"), "application/json");
    });
    server.Get("/index_page2.json", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content(read_fixture("index/index_page2.json"), "application/json");
    });
    server.Get(R"(/spl/(.+)\.xml)", [&](const httplib::Request& req, httplib::Response& res) {
        std::string body = read_fixture("spl/" + req.matches[1].str() + ".xml");
        if (body.empty())
            res.status = 404;
        else
            res.set_content(body, "application/xml");
    });

    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    std::string base = "http://127.0.0.1:" + std::to_string(port);

    auto entries = fetch_label_index(base + "/index.json", {.retries = 2});
    CHECK(entries.size() == 6);
    CHECK(page1_attempts.load() == 2);

    std::vector<LabelIndexEntry> subset(entries.begin(), entries.begin() + 2);
    auto docs = fetch_documents(base + "/index.json", subset, {.retries = 1, .parallel = 2});
    CHECK(docs.size() == 2);
    CHECK(docs.count("SET-A1A") == 1);

    SUBCASE("exhausted retries surface an ingestion error") {
        server.Get("/flaky.json", [](const httplib::Request&, httplib::Response& res) {
            res.status = 503;
        });
        CHECK_THROWS_AS(fetch_label_index(base + "/flaky.json", {.retries = 1}), IngestError);
    }

    server.stop();
    worker.join();
}

TEST_CASE("fetch_documents in local mode reads <set_id>.xml from the directory") {
    std::vector<LabelIndexEntry> entries = {
        {"SET-A1A", "NDA208400", 4, ""},
        {"SET-MISSING", "NDA000000", 1, ""},
    };
    auto docs = fetch_documents(fixture_path("spl"), entries, {});
    CHECK(docs.size() == 1);  // missing files are simply absent
    CHECK(docs.count("SET-A1A") == 1);
}

TEST_CASE("load_spl_directory keys documents by set_id") {
    auto docs = load_spl_directory(fixture_path("spl_small"));
    CHECK(docs.size() == 3);
    CHECK(docs.count("SET-A1A") == 1);
    CHECK(docs.count("SET-ANDA") == 1);
}

TEST_CASE("load_spl_directory names the offending file on bad XML") {
    try {
        load_spl_directory(fixture_path("spl_bad_dir"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("bad.xml") != std::string::npos);
    }
}

}  // TEST_SUITE
