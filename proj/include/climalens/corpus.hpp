#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "climalens/month.hpp"
#include "climalens/textkit.hpp"

namespace climalens::corpus {

// One 15-second block of airtime retrieved by keyword search.
struct Snippet {
    std::string station;
    DateTime timestamp;
    std::string text;
    std::optional<std::string> matched_keyword;
};

enum class SnippetFormat { Csv, Jsonl };

// A record that failed to parse; parsing continues past it.
struct RecordError {
    int line = 0;
    std::string message;
};

struct ParseResult {
    std::vector<Snippet> snippets;
    std::vector<RecordError> errors;
};

// Reads snippets from a CSV stream (header station,timestamp,keyword,text)
// or a JSONL stream (one object per line, same fields). Malformed records
// are collected in `errors` rather than aborting the parse; a malformed
// header or undecodable stream throws FormatError.
ParseResult parse_snippets(std::istream& in, SnippetFormat format);

// Collapses exact (station, timestamp, text) duplicates, keeping the first.
std::vector<Snippet> dedup(std::vector<Snippet> snippets);

// Keeps snippets whose tokenized text contains at least one keyword phrase
// and stamps matched_keyword with the first keyword (in list order) that hit.
std::vector<Snippet> filter_by_keywords(const std::vector<Snippet>& snippets,
                                        const std::vector<std::string>& keywords);

// Per-month counts feeding the index formulas.
struct MonthlyBucket {
    MonthKey month;
    int64_t snippet_count = 0;
    int64_t word_count = 0;
    std::map<textkit::Theme, int64_t> theme_counts;
    int64_t pos_words = 0;
    int64_t neg_words = 0;
};

// Buckets snippets by UTC calendar month, counting words, theme matches and
// sentiment words via textkit. Output is sorted ascending by month with no
// gaps: when `window` is given every month in it gets a bucket (snippets
// outside are dropped), otherwise the span runs from the earliest to the
// latest month present.
std::vector<MonthlyBucket> aggregate_monthly(
    const std::vector<Snippet>& snippets,
    const std::vector<textkit::ThemeVocabulary>& vocabularies,
    const textkit::SentimentLexicon& lexicon,
    std::optional<MonthRange> window = std::nullopt);

}  // namespace climalens::corpus
