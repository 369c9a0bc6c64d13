#include <doctest.h>

#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "climalens/corpus.hpp"
#include "climalens/errors.hpp"
#include "climalens/fetch.hpp"
#include "climalens/hashing.hpp"
#include "test_util.hpp"

using namespace climalens;
using fetch::FetchOptions;
using fetch::Transport;
using nlohmann::json;

namespace {

const MonthRange kWindow{{2019, 1}, {2019, 3}};

json record(const std::string& station, const std::string& when, const std::string& text) {
    return {{"station", station}, {"timestamp", when}, {"text", text}};
}

// One (query, station) search spread over three pages.
struct StubServer {
    httplib::Server server;
    int port = 0;
    std::thread thread;
    std::vector<std::string> seen_paths;

    StubServer() {
        server.Get("/search", [this](const httplib::Request& req, httplib::Response& res) {
            seen_paths.push_back(req.path + "?" + req.get_param_value("query") + "|page=" +
                                 req.get_param_value("page"));
            if (req.get_param_value("query") == "boom") {
                res.status = 500;
                return;
            }
            if (req.get_param_value("query") == "garble") {
                res.set_content("this is not json", "text/plain");
                return;
            }
            int page = std::stoi(req.get_param_value("page"));
            json body;
            body["records"] = json::array();
            body["records"].push_back(record("CNN", "2019-01-0" + std::to_string(page) +
                                                        "T10:00Z",
                                             "page " + std::to_string(page) + " first"));
            if (page < 3) {
                body["records"].push_back(
                    record("CNN", "2019-02-01T11:30Z", "page " + std::to_string(page)));
                body["next_page"] = page + 1;
            }
            res.set_content(body.dump(), "application/json");
        });
        port = server.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~StubServer() {
        server.stop();
        thread.join();
    }
    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

}  // namespace

TEST_SUITE("fetch") {

TEST_CASE("fixture keys hash the full request identity") {
    std::string key = fetch::fixture_key("climate change", "CNN", kWindow);
    CHECK(key == sha256_hex("climate change\nCNN\n2019-01..2019-03").substr(0, 16));
    CHECK(key.size() == 16);
    for (char c : key) CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));

    CHECK(fetch::fixture_key("climate change", "MSNBC", kWindow) != key);
    CHECK(fetch::fixture_key("global warming", "CNN", kWindow) != key);
    CHECK(fetch::fixture_key("climate change", "CNN", MonthRange{{2019, 1}, {2019, 4}}) != key);
}

TEST_CASE("replay returns the recorded pages in order") {
    testutil::TempDir dir("fixtures");
    std::string key = fetch::fixture_key("climate change", "CNN", kWindow);
    json fixture;
    fixture["pages"] = json::array();
    fixture["pages"].push_back(json::array({record("CNN", "2019-01-05T10:00Z", "one"),
                                            record("CNN", "2019-01-06T11:00Z", "two")}));
    fixture["pages"].push_back(json::array({record("CNN", "2019-02-07T12:00Z", "three")}));
    std::ofstream(dir.file(key + ".json")) << fixture.dump(2) << "\n";

    FetchOptions options;
    options.transport = Transport::Replay;
    options.fixtures_dir = dir.str();
    std::string jsonl = fetch::fetch_snippets("climate change", "CNN", kWindow, options);

    std::istringstream lines(jsonl);
    std::string line;
    std::vector<std::string> texts;
    while (std::getline(lines, line)) texts.push_back(json::parse(line)["text"]);
    CHECK(texts == std::vector<std::string>{"one", "two", "three"});

    // The replayed stream is directly ingestible.
    std::istringstream in(jsonl);
    auto parsed = corpus::parse_snippets(in, corpus::SnippetFormat::Jsonl);
    REQUIRE(parsed.snippets.size() == 3);
    CHECK(parsed.errors.empty());
    CHECK(parsed.snippets[2].text == "three");
    CHECK_FALSE(parsed.snippets[0].matched_keyword.has_value());
}

TEST_CASE("replay without a fixture names the missing key") {
    testutil::TempDir dir("fixtures");
    FetchOptions options;
    options.transport = Transport::Replay;
    options.fixtures_dir = dir.str();
    try {
        fetch::fetch_snippets("climate change", "CNN", kWindow, options);
        FAIL("expected MissingFixture");
    } catch (const MissingFixture& e) {
        CHECK(e.key == fetch::fixture_key("climate change", "CNN", kWindow));
        CHECK(std::string(e.what()).find(dir.str()) != std::string::npos);
    }
}

TEST_CASE("corrupt fixtures are transport errors") {
    testutil::TempDir dir("fixtures");
    FetchOptions options;
    options.transport = Transport::Replay;
    options.fixtures_dir = dir.str();

    std::string key = fetch::fixture_key("q", "CNN", kWindow);
    std::ofstream(dir.file(key + ".json")) << "{ not json";
    CHECK_THROWS_AS(fetch::fetch_snippets("q", "CNN", kWindow, options), TransportError);

    std::ofstream(dir.file(key + ".json"), std::ios::trunc) << "{\"records\": []}";
    CHECK_THROWS_AS(fetch::fetch_snippets("q", "CNN", kWindow, options), TransportError);
}

TEST_CASE("live fetch walks the pagination chain") {
    StubServer stub;
    testutil::TempDir dir("fixtures");
    FetchOptions options;
    options.transport = Transport::Live;
    options.base_url = stub.base_url();
    options.fixtures_dir = dir.str();
    options.rate_limit_ms = 0;
    options.record = true;

    std::string jsonl = fetch::fetch_snippets("climate change", "CNN", kWindow, options);
    std::istringstream lines(jsonl);
    std::string line;
    std::vector<std::string> texts;
    while (std::getline(lines, line)) texts.push_back(json::parse(line)["text"]);
    CHECK(texts == std::vector<std::string>{"page 1 first", "page 1", "page 2 first",
                                            "page 2", "page 3 first"});
    REQUIRE(stub.seen_paths.size() == 3);
    CHECK(stub.seen_paths[0] == "/search?climate change|page=1");
    CHECK(stub.seen_paths[2] == "/search?climate change|page=3");

    // Recording makes the identical stream replayable offline.
    options.transport = Transport::Replay;
    CHECK(fetch::fetch_snippets("climate change", "CNN", kWindow, options) == jsonl);
}

TEST_CASE("live failures become transport errors") {
    StubServer stub;
    FetchOptions options;
    options.transport = Transport::Live;
    options.base_url = stub.base_url();
    options.rate_limit_ms = 0;

    CHECK_THROWS_AS(fetch::fetch_snippets("boom", "CNN", kWindow, options), TransportError);
    CHECK_THROWS_AS(fetch::fetch_snippets("garble", "CNN", kWindow, options), TransportError);

    options.base_url = "http://127.0.0.1:1";  // nothing listens here
    CHECK_THROWS_AS(fetch::fetch_snippets("q", "CNN", kWindow, options), TransportError);
}

}  // TEST_SUITE
