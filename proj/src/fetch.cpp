#include "climalens/fetch.hpp"

#include <chrono>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "climalens/errors.hpp"
#include "climalens/hashing.hpp"

namespace climalens::fetch {

namespace {

using nlohmann::json;

std::string percent_encode(const std::string& s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        bool unreserved = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                          (c >= '0' && c <= '9') || c == '-' || c == '_' ||
                          c == '.' || c == '~';
        if (unreserved) {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 15];
        }
    }
    return out;
}

std::string records_to_jsonl(const std::vector<json>& pages) {
    std::string out;
    for (const auto& page : pages)
        for (const auto& rec : page)
            out += rec.dump() + "\n";
    return out;
}

std::vector<json> fetch_live_pages(const std::string& query, const std::string& station,
                                   const MonthRange& window, const FetchOptions& options) {
    httplib::Client client(options.base_url);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);

    std::vector<json> pages;
    int page = 1;
    while (true) {
        if (page > 1 && options.rate_limit_ms > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(options.rate_limit_ms));
        std::string path = "/search?query=" + percent_encode(query) +
                           "&station=" + percent_encode(station) +
                           "&start=" + window.start.str() + "&end=" + window.end.str() +
                           "&page=" + std::to_string(page);
        auto res = client.Get(path);
        if (!res)
            throw TransportError("GET " + options.base_url + path + " failed: " +
                                 httplib::to_string(res.error()));
        if (res->status != 200)
            throw TransportError("GET " + options.base_url + path + " returned status " +
                                 std::to_string(res->status));
        json body;
        try {
            body = json::parse(res->body);
        } catch (const json::exception& e) {
            throw TransportError(std::string("response is not valid JSON: ") + e.what());
        }
        if (!body.contains("records") || !body["records"].is_array())
            throw TransportError("response lacks a records array");
        pages.push_back(body["records"]);
        auto next = body.find("next_page");
        if (next == body.end() || next->is_null()) break;
        page = next->get<int>();
    }
    return pages;
}

}  // namespace

std::string fixture_key(const std::string& query, const std::string& station,
                        const MonthRange& window) {
    return sha256_hex(query + "\n" + station + "\n" + window.str()).substr(0, 16);
}

std::string fetch_snippets(const std::string& query, const std::string& station,
                           const MonthRange& window, const FetchOptions& options) {
    std::string key = fixture_key(query, station, window);
    std::string path = options.fixtures_dir + "/" + key + ".json";

    if (options.transport == Transport::Replay) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw MissingFixture(key, path);
        json fixture;
        try {
            in >> fixture;
        } catch (const json::exception& e) {
            throw TransportError("fixture " + path + " is not valid JSON: " + e.what());
        }
        if (!fixture.contains("pages") || !fixture["pages"].is_array())
            throw TransportError("fixture " + path + " lacks a pages array");
        return records_to_jsonl(fixture["pages"].get<std::vector<json>>());
    }

    auto pages = fetch_live_pages(query, station, window, options);
    if (options.record) {
        json fixture = {{"query", query},
                        {"station", station},
                        {"window", window.str()},
                        {"pages", pages}};
        std::ofstream out(path, std::ios::binary);
        if (!out) throw TransportError("cannot write fixture " + path);
        out << fixture.dump(2) << "\n";
    }
    return records_to_jsonl(pages);
}

}  // namespace climalens::fetch
