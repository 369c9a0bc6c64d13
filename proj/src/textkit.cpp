#include "climalens/textkit.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "climalens/errors.hpp"

namespace climalens::textkit {

namespace {

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_joiner(char c) { return c == '\'' || c == '-'; }

bool all_digits(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

void push_token(std::vector<Token>& out, std::string&& run) {
    size_t b = 0, e = run.size();
    while (b < e && is_joiner(run[b])) ++b;
    while (e > b && is_joiner(run[e - 1])) --e;
    if (b == e) return;
    std::string tok = run.substr(b, e - b);
    if (all_digits(tok)) return;
    out.push_back(std::move(tok));
}

std::string lower(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return s;
}

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    std::string run;
    for (char c : text) {
        if (is_word_char(c) || is_joiner(c)) {
            run += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
        } else if (!run.empty()) {
            push_token(tokens, std::move(run));
            run.clear();
        }
    }
    if (!run.empty()) push_token(tokens, std::move(run));
    return tokens;
}

bool WildcardPattern::matches(const Token& token) const {
    if (is_wildcard)
        return token.size() >= stem.size() && token.compare(0, stem.size(), stem) == 0;
    return token == stem;
}

WildcardPattern compile_pattern(const std::string& source) {
    if (source.empty()) throw MalformedPattern("empty pattern");
    std::string s = lower(source);
    size_t star = s.find('*');
    WildcardPattern p;
    if (star == std::string::npos) {
        p.stem = s;
    } else if (star == s.size() - 1) {
        p.stem = s.substr(0, s.size() - 1);
        p.is_wildcard = true;
    } else {
        throw MalformedPattern("'*' only allowed at end of pattern: '" + source + "'");
    }
    if (p.stem.empty()) throw MalformedPattern("empty stem in pattern: '" + source + "'");
    // The stem must be a canonical token, otherwise it could never match
    // tokenizer output.
    auto toks = tokenize(p.stem);
    if (toks.size() != 1 || toks[0] != p.stem)
        throw MalformedPattern("pattern word is not a valid token: '" + source + "'");
    return p;
}

bool PhrasePattern::matches_at(const std::vector<Token>& tokens, size_t pos) const {
    if (pos + words.size() > tokens.size()) return false;
    for (size_t i = 0; i < words.size(); ++i)
        if (!words[i].matches(tokens[pos + i])) return false;
    return true;
}

std::string PhrasePattern::str() const {
    std::string s;
    for (size_t i = 0; i < words.size(); ++i) {
        if (i) s += ' ';
        s += words[i].stem;
        if (words[i].is_wildcard) s += '*';
    }
    return s;
}

PhrasePattern compile_phrase(const std::string& source) {
    std::istringstream in(source);
    PhrasePattern phrase;
    std::string word;
    while (in >> word) {
        bool wildcard = false;
        size_t star = word.find('*');
        if (star != std::string::npos) {
            if (star != word.size() - 1)
                throw MalformedPattern("'*' only allowed at end of pattern: '" + source + "'");
            wildcard = true;
            word.pop_back();
        }
        // Phrase words go through the same tokenizer as snippet text, so a
        // word the tokenizer drops (digits-only, pure punctuation) drops
        // from the phrase too and can never block a match.
        auto toks = tokenize(word);
        if (toks.empty()) {
            if (wildcard)
                throw MalformedPattern("empty stem in pattern: '" + source + "'");
            continue;
        }
        for (size_t i = 0; i < toks.size(); ++i)
            phrase.words.push_back({toks[i], wildcard && i + 1 == toks.size()});
    }
    if (phrase.words.empty()) throw MalformedPattern("empty phrase: '" + source + "'");
    for (size_t i = 0; i + 1 < phrase.words.size(); ++i)
        if (phrase.words[i].is_wildcard)
            throw MalformedPattern("wildcard only allowed on final word: '" + source + "'");
    return phrase;
}

const char* theme_name(Theme t) {
    switch (t) {
        case Theme::CC: return "cc";
        case Theme::RE: return "re";
        case Theme::GHI: return "ghi";
    }
    return "?";
}

void ThemeVocabulary::add(const std::string& source) {
    PhrasePattern p = compile_phrase(source);
    std::string canon = p.str();
    for (const auto& existing : patterns)
        if (existing.str() == canon) return;
    patterns.push_back(std::move(p));
}

ThemeVocabulary ThemeVocabulary::load(Theme theme, std::istream& in) {
    ThemeVocabulary vocab;
    vocab.theme = theme;
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // Trim.
        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        size_t e = line.find_last_not_of(" \t\r");
        vocab.add(line.substr(b, e - b + 1));
    }
    return vocab;
}

ThemeVocabulary ThemeVocabulary::load_file(Theme theme, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open vocabulary file: " + path);
    return load(theme, in);
}

int64_t count_theme_matches(const std::vector<Token>& tokens, const ThemeVocabulary& vocab) {
    int64_t total = 0;
    for (const auto& pattern : vocab.patterns) {
        size_t pos = 0;
        while (pos < tokens.size()) {
            if (pattern.matches_at(tokens, pos)) {
                ++total;
                pos += pattern.size();
            } else {
                ++pos;
            }
        }
    }
    return total;
}

SentimentLexicon SentimentLexicon::load(std::istream& in) {
    SentimentLexicon lex;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        size_t t1 = line.find('\t');
        size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw FormatError(line_no, "expected word<TAB>category<TAB>flag");
        std::string word = lower(line.substr(0, t1));
        std::string category = line.substr(t1 + 1, t2 - t1 - 1);
        std::string flag = line.substr(t2 + 1);
        if (flag != "0" && flag != "1")
            throw FormatError(line_no, "flag must be 0 or 1, got '" + flag + "'");
        if (category != "positive" && category != "negative") continue;
        if (flag == "0") continue;
        auto& entry = lex.entries[word];
        if (category == "positive") entry.is_positive = true;
        else entry.is_negative = true;
    }
    return lex;
}

SentimentLexicon SentimentLexicon::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open lexicon file: " + path);
    return load(in);
}

SentimentCounts count_sentiment(const std::vector<Token>& tokens, const SentimentLexicon& lex) {
    SentimentCounts counts;
    for (const auto& token : tokens) {
        auto it = lex.entries.find(token);
        if (it == lex.entries.end()) continue;
        if (it->second.is_positive) ++counts.pos;
        if (it->second.is_negative) ++counts.neg;
    }
    return counts;
}

}  // namespace climalens::textkit
