#pragma once

#include <string>

#include "climalens/month.hpp"

namespace climalens::fetch {

enum class Transport { Live, Replay };

struct FetchOptions {
    Transport transport = Transport::Replay;
    std::string fixtures_dir;   // directory of recorded responses
    std::string base_url;       // live endpoint, e.g. http://host:port
    int rate_limit_ms = 250;    // pause between consecutive page requests
    bool record = false;        // live mode: also store the response as a fixture
};

// Stable fixture key: the first 16 hex characters of
// sha256("query\nstation\nYYYY-MM..YYYY-MM"). The fixture file is
// <fixtures_dir>/<key>.json.
std::string fixture_key(const std::string& query, const std::string& station,
                        const MonthRange& window);

// Retrieves the raw records for one (query, station, window) search and
// returns them as JSONL text suitable for parse_snippets. Live mode walks
// GET <base_url>/search?query=..&station=..&start=..&end=..&page=N until the
// response reports no next page; replay mode reads the stored fixture
// verbatim. Throws TransportError (live) or MissingFixture (replay).
std::string fetch_snippets(const std::string& query, const std::string& station,
                           const MonthRange& window, const FetchOptions& options);

}  // namespace climalens::fetch
