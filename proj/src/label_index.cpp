#include "adme/label_index.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "adme/error.hpp"

namespace adme {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool is_http(const std::string& s) { return s.rfind("http://", 0) == 0; }

struct UrlParts {
    std::string host_port;  // "host:port"
    std::string path;       // "/index.json"
};

UrlParts split_url(const std::string& url) {
    if (url.rfind("https://", 0) == 0)
        throw ConfigError("https endpoints are not supported; use http or a local path");
    std::string rest = url.substr(7);
    auto slash = rest.find('/');
    UrlParts parts;
    parts.host_port = rest.substr(0, slash);
    parts.path = slash == std::string::npos ? "/" : rest.substr(slash);
    return parts;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// GET with retry; throws IngestError after the configured attempts.
std::string http_get(const std::string& host_port, const std::string& path, int retries) {
    std::string last_error;
    for (int attempt = 0; attempt <= retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(20));
        httplib::Client client(("http://" + host_port).c_str());
        client.set_connection_timeout(5, 0);
        client.set_read_timeout(10, 0);
        auto res = client.Get(path.c_str());
        if (!res) {
            last_error = "connection failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server error " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw IngestError("HTTP " + std::to_string(res->status) + " fetching " + path, path);
        return res->body;
    }
    throw IngestError("network unreachable after " + std::to_string(retries + 1) +
                          " attempts (" + last_error + ")",
                      path);
}

struct IndexPage {
    std::vector<LabelIndexEntry> entries;
    std::string next_page;
};

IndexPage parse_index_page(const std::string& body, const std::string& cursor) {
    json page;
    try {
        page = json::parse(body);
    } catch (const json::parse_error& e) {
        throw ParseError("malformed index payload at " + cursor + ": " + e.what(),
                         static_cast<long>(e.byte));
    }
    IndexPage out;
    if (!page.is_object() || !page.contains("entries") || !page["entries"].is_array())
        throw ParseError("index payload at " + cursor + " lacks an \"entries\" array");
    for (const json& item : page["entries"]) {
        LabelIndexEntry entry;
        entry.set_id = item.value("set_id", "");
        if (entry.set_id.empty())
            throw ParseError("index entry without set_id at " + cursor);
        entry.application_number = item.value("application_number", "");
        entry.version = item.value("version", 1);
        entry.published = item.value("published", "");
        out.entries.push_back(std::move(entry));
    }
    out.next_page = page.value("next_page", "");
    return out;
}

std::string parent_of(const std::string& url_or_path) {
    auto slash = url_or_path.find_last_of('/');
    return slash == std::string::npos ? std::string(".") : url_or_path.substr(0, slash);
}

}  // namespace

std::vector<LabelIndexEntry> fetch_label_index(const std::string& endpoint_or_path,
                                               const FetchOptions& options) {
    std::vector<LabelIndexEntry> entries;
    std::set<std::pair<std::string, int>> seen;

    std::string cursor = endpoint_or_path;
    int pages = 0;
    const bool http = is_http(endpoint_or_path);
    UrlParts base;
    if (http) base = split_url(endpoint_or_path);

    while (!cursor.empty()) {
        if (options.page_limit > 0 && pages >= options.page_limit) break;
        std::string body;
        if (http) {
            UrlParts parts = is_http(cursor) ? split_url(cursor) : UrlParts{base.host_port, cursor};
            if (parts.path.empty() || parts.path[0] != '/') parts.path = "/" + parts.path;
            body = http_get(parts.host_port, parts.path, options.retries);
        } else {
            fs::path path(cursor);
            if (!fs::exists(path)) throw IngestError("index file not found: " + cursor, cursor);
            body = read_file(path);
        }
        IndexPage page = parse_index_page(body, cursor);
        for (LabelIndexEntry& entry : page.entries) {
            if (seen.emplace(entry.set_id, entry.version).second)
                entries.push_back(std::move(entry));
        }
        ++pages;
        if (page.next_page.empty()) break;
        cursor = http || is_http(page.next_page)
                     ? page.next_page
                     : (fs::path(parent_of(cursor)) / page.next_page).string();
    }
    return entries;
}

std::map<std::string, SplDocument> fetch_documents(const std::string& endpoint_or_path,
                                                   const std::vector<LabelIndexEntry>& entries,
                                                   const FetchOptions& options) {
    if (!is_http(endpoint_or_path)) {
        // Local mode: treat the argument as a directory of <set_id>.xml files.
        std::map<std::string, SplDocument> docs;
        for (const LabelIndexEntry& entry : entries) {
            fs::path path = fs::path(endpoint_or_path) / (entry.set_id + ".xml");
            if (!fs::exists(path)) continue;
            SplDocument doc = parse_spl(read_file(path));
            docs.emplace(doc.set_id, std::move(doc));
        }
        return docs;
    }

    std::string tmpl = options.doc_url_template.empty()
                           ? parent_of(endpoint_or_path) + "/spl/{set_id}.xml"
                           : options.doc_url_template;

    std::vector<std::string> bodies(entries.size());
    std::vector<std::string> errors(entries.size());
    std::atomic<std::size_t> next{0};
    int workers = std::max(1, std::min<int>(options.parallel, static_cast<int>(entries.size())));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= entries.size()) return;
                std::string url = tmpl;
                auto pos = url.find("{set_id}");
                if (pos != std::string::npos) url.replace(pos, 8, entries[i].set_id);
                try {
                    UrlParts parts = split_url(url);
                    bodies[i] = http_get(parts.host_port, parts.path, options.retries);
                } catch (const Error& e) {
                    errors[i] = e.what();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();

    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!errors[i].empty())
            throw IngestError("failed to fetch document " + entries[i].set_id + ": " + errors[i],
                              entries[i].set_id);
    }

    std::map<std::string, SplDocument> docs;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        SplDocument doc = parse_spl(bodies[i]);
        docs.emplace(doc.set_id, std::move(doc));
    }
    return docs;
}

std::map<std::string, SplDocument> load_spl_directory(const std::string& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".xml")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::map<std::string, SplDocument> docs;
    for (const fs::path& file : files) {
        try {
            SplDocument doc = parse_spl(read_file(file));
            docs.emplace(doc.set_id, std::move(doc));
        } catch (const ParseError& e) {
            throw ParseError(file.filename().string() + ": " + e.what());
        }
    }
    return docs;
}

}  // namespace adme
