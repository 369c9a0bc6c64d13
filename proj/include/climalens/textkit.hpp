#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace climalens::textkit {

// A token is a lowercase word: letters/digits with internal apostrophes or
// hyphens. tokenize() is the only producer, so the invariant lives there.
using Token = std::string;

// Splits raw snippet text into tokens. Lowercases, treats everything
// outside [a-z0-9'-] as a separator, keeps apostrophes and hyphens only
// between word characters, and drops digit-only tokens. Total function:
// empty input gives an empty sequence, and tokenize is idempotent on its
// own output joined by spaces.
std::vector<Token> tokenize(const std::string& text);

// One word of a vocabulary pattern. A trailing '*' in the source marks a
// prefix wildcard; the stored stem never contains '*'.
struct WildcardPattern {
    std::string stem;
    bool is_wildcard = false;

    bool matches(const Token& token) const;
};

// Compiles a single-word pattern. '*' is allowed once, at the end only;
// throws MalformedPattern otherwise or when the stem is empty or contains
// characters the tokenizer would split on.
WildcardPattern compile_pattern(const std::string& source);

// A phrase pattern: one or more words matched against consecutive tokens.
// Only the final word may carry a wildcard.
struct PhrasePattern {
    std::vector<WildcardPattern> words;

    size_t size() const { return words.size(); }
    bool matches_at(const std::vector<Token>& tokens, size_t pos) const;
    std::string str() const;
};

// Compiles a whitespace-separated phrase. Each word is tokenized like
// snippet text, so words the tokenizer drops (digits-only, punctuation)
// drop from the phrase. Throws MalformedPattern when a non-final word
// carries a wildcard, a '*' is not word-final, or nothing survives.
PhrasePattern compile_phrase(const std::string& source);

enum class Theme { CC, RE, GHI };

const char* theme_name(Theme t);

// Patterns for one coverage theme. Duplicate patterns are collapsed.
struct ThemeVocabulary {
    Theme theme = Theme::CC;
    std::vector<PhrasePattern> patterns;

    void add(const std::string& source);  // ignores exact duplicates

    // Loads a vocabulary file: UTF-8, one pattern per line, '#' starts a
    // comment, blank lines ignored, phrases written with single spaces.
    static ThemeVocabulary load(Theme theme, std::istream& in);
    static ThemeVocabulary load_file(Theme theme, const std::string& path);
};

// Total phrase occurrences of the vocabulary in a token sequence. Each
// pattern is scanned left to right independently; an occurrence of a
// k-word phrase consumes its k tokens for that pattern, so occurrences of
// one pattern never overlap. A phrase occurrence counts once, not k times.
// Adding a pattern can therefore never decrease the count.
int64_t count_theme_matches(const std::vector<Token>& tokens, const ThemeVocabulary& vocab);

// Word polarity lookup. A word may be both positive and negative; both
// counters advance when it is.
struct SentimentLexicon {
    struct Entry {
        bool is_positive = false;
        bool is_negative = false;
    };
    std::unordered_map<std::string, Entry> entries;

    // Loads the tab-separated lexicon layout word<TAB>category<TAB>flag.
    // Categories "positive" and "negative" are consumed; the eight emotion
    // categories are ignored. Flag must be 0 or 1.
    static SentimentLexicon load(std::istream& in);
    static SentimentLexicon load_file(const std::string& path);
};

struct SentimentCounts {
    int64_t pos = 0;
    int64_t neg = 0;
};

// Per-token lexicon lookup over the whole sequence.
SentimentCounts count_sentiment(const std::vector<Token>& tokens, const SentimentLexicon& lex);

}  // namespace climalens::textkit
