#include "climalens/corpus.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <tuple>

#include <json.hpp>

#include "climalens/csvio.hpp"
#include "climalens/errors.hpp"

namespace climalens::corpus {

namespace {

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

// Builds one snippet from the four raw column values, throwing FormatError
// on a bad record; the caller attaches the line number.
Snippet make_snippet(const std::string& station, const std::string& timestamp,
                     const std::string& keyword, const std::string& text) {
    if (blank(station)) throw FormatError(0, "missing station");
    if (blank(timestamp)) throw FormatError(0, "missing timestamp");
    if (blank(text)) throw FormatError(0, "empty text");
    Snippet s;
    s.station = station;
    s.timestamp = DateTime::parse(timestamp);
    s.text = text;
    if (!keyword.empty()) s.matched_keyword = keyword;
    return s;
}

ParseResult parse_csv(std::istream& in) {
    ParseResult result;
    CsvReader reader(in);
    auto header = reader.next();
    static const std::vector<std::string> kHeader = {"station", "timestamp", "keyword", "text"};
    if (!header || *header != kHeader)
        throw FormatError(1, "expected header station,timestamp,keyword,text");
    while (auto row = reader.next()) {
        int line = reader.record_line();
        try {
            if (row->size() != 4)
                throw FormatError(0, "expected 4 fields, got " + std::to_string(row->size()));
            result.snippets.push_back(
                make_snippet((*row)[0], (*row)[1], (*row)[2], (*row)[3]));
        } catch (const FormatError& e) {
            result.errors.push_back({line, e.what()});
        }
    }
    return result;
}

ParseResult parse_jsonl(std::istream& in) {
    ParseResult result;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        try {
            auto obj = nlohmann::json::parse(line);
            if (!obj.is_object()) throw FormatError(0, "record is not an object");
            auto field = [&](const char* name) -> std::string {
                auto it = obj.find(name);
                if (it == obj.end() || it->is_null()) return {};
                if (!it->is_string())
                    throw FormatError(0, std::string(name) + " is not a string");
                return it->get<std::string>();
            };
            result.snippets.push_back(make_snippet(field("station"), field("timestamp"),
                                                   field("keyword"), field("text")));
        } catch (const nlohmann::json::exception& e) {
            result.errors.push_back({line_no, e.what()});
        } catch (const FormatError& e) {
            result.errors.push_back({line_no, e.what()});
        }
    }
    return result;
}

}  // namespace

ParseResult parse_snippets(std::istream& in, SnippetFormat format) {
    return format == SnippetFormat::Csv ? parse_csv(in) : parse_jsonl(in);
}

std::vector<Snippet> dedup(std::vector<Snippet> snippets) {
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    std::vector<Snippet> out;
    out.reserve(snippets.size());
    for (auto& s : snippets) {
        if (seen.insert({s.station, s.timestamp.str(), s.text}).second)
            out.push_back(std::move(s));
    }
    return out;
}

std::vector<Snippet> filter_by_keywords(const std::vector<Snippet>& snippets,
                                        const std::vector<std::string>& keywords) {
    if (keywords.empty()) throw ConfigError("keyword list is empty");
    std::vector<textkit::PhrasePattern> phrases;
    phrases.reserve(keywords.size());
    for (const auto& k : keywords) phrases.push_back(textkit::compile_phrase(k));

    std::vector<Snippet> out;
    for (const auto& s : snippets) {
        auto tokens = textkit::tokenize(s.text);
        for (size_t i = 0; i < phrases.size(); ++i) {
            bool hit = false;
            for (size_t pos = 0; pos + phrases[i].size() <= tokens.size() && !hit; ++pos)
                hit = phrases[i].matches_at(tokens, pos);
            if (hit) {
                out.push_back(s);
                out.back().matched_keyword = keywords[i];
                break;
            }
        }
    }
    return out;
}

std::vector<MonthlyBucket> aggregate_monthly(
    const std::vector<Snippet>& snippets,
    const std::vector<textkit::ThemeVocabulary>& vocabularies,
    const textkit::SentimentLexicon& lexicon,
    std::optional<MonthRange> window) {
    std::map<MonthKey, MonthlyBucket> buckets;
    auto bucket_for = [&](MonthKey m) -> MonthlyBucket& {
        auto [it, fresh] = buckets.try_emplace(m);
        if (fresh) {
            it->second.month = m;
            for (const auto& v : vocabularies) it->second.theme_counts[v.theme] = 0;
        }
        return it->second;
    };

    for (const auto& s : snippets) {
        MonthKey m = s.timestamp.date.month_key();
        if (window && !window->contains(m)) continue;
        auto tokens = textkit::tokenize(s.text);
        MonthlyBucket& b = bucket_for(m);
        b.snippet_count += 1;
        b.word_count += static_cast<int64_t>(tokens.size());
        for (const auto& v : vocabularies)
            b.theme_counts[v.theme] += textkit::count_theme_matches(tokens, v);
        auto sent = textkit::count_sentiment(tokens, lexicon);
        b.pos_words += sent.pos;
        b.neg_words += sent.neg;
    }

    // Fill gaps so every month in the span is represented.
    if (window) {
        for (MonthKey m = window->start;; m = m.next()) {
            bucket_for(m);
            if (m == window->end) break;
        }
    } else if (!buckets.empty()) {
        MonthKey first = buckets.begin()->first;
        MonthKey last = buckets.rbegin()->first;
        for (MonthKey m = first;; m = m.next()) {
            bucket_for(m);
            if (m == last) break;
        }
    }

    std::vector<MonthlyBucket> out;
    out.reserve(buckets.size());
    for (auto& [m, b] : buckets) out.push_back(std::move(b));
    return out;
}

}  // namespace climalens::corpus
