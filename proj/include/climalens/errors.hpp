#pragma once

#include <stdexcept>
#include <string>

namespace climalens {

// Base class for all pipeline errors so the CLI can catch one type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A vocabulary or keyword pattern that violates the pattern grammar.
class MalformedPattern : public Error {
public:
    explicit MalformedPattern(const std::string& msg) : Error(msg) {}
};

// Malformed input record; carries the 1-based line number of the record start.
class FormatError : public Error {
public:
    FormatError(int line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line(line) {}
    // Value-level form for parsers that see no line numbers.
    explicit FormatError(const std::string& msg) : Error(msg), line(0) {}
    int line;
};

// Live HTTP transport failure.
class TransportError : public Error {
public:
    explicit TransportError(const std::string& msg) : Error(msg) {}
};

// Replay-mode fetch with no recorded fixture; carries the fixture key.
class MissingFixture : public Error {
public:
    MissingFixture(const std::string& key, const std::string& path)
        : Error("missing fixture " + key + " (expected at " + path + ")"), key(key) {}
    std::string key;
};

// Index requested for a month with no snippets or no words.
class UndefinedIndex : public Error {
public:
    explicit UndefinedIndex(const std::string& msg) : Error(msg) {}
};

// Too few observations for the requested summary statistic.
class InsufficientData : public Error {
public:
    explicit InsufficientData(const std::string& msg) : Error(msg) {}
};

// Design matrix numerically rank deficient; carries the offending column.
class RankDeficient : public Error {
public:
    RankDeficient(int column, const std::string& name)
        : Error("rank-deficient design matrix, column " + std::to_string(column) +
                (name.empty() ? "" : " (" + name + ")")),
          column(column), column_name(name) {}
    int column;
    std::string column_name;
};

// Cluster-robust covariance preconditions violated.
class DegenerateClusters : public Error {
public:
    explicit DegenerateClusters(const std::string& msg) : Error(msg) {}
};

// Date join between returns and factors is empty.
class NoOverlap : public Error {
public:
    explicit NoOverlap(const std::string& msg) : Error(msg) {}
};

// Log transform requested on a non-positive level; names the series and month.
class NonPositiveLevel : public Error {
public:
    NonPositiveLevel(const std::string& series, const std::string& month)
        : Error("non-positive level in " + series + " at " + month),
          series(series), month(month) {}
    std::string series;
    std::string month;
};

// Panel assembly or subsetting produced zero usable rows.
class EmptyPanel : public Error {
public:
    explicit EmptyPanel(const std::string& msg) : Error(msg) {}
};

// A regressor is constant within every firm and cannot be identified
// alongside firm fixed effects; carries the regressor name.
class NoWithinVariation : public Error {
public:
    explicit NoWithinVariation(const std::string& variable)
        : Error("no within-firm variation in regressor " + variable),
          variable(variable) {}
    std::string variable;
};

// Bad configuration value or missing input path.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace climalens
