#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace climalens {

// RFC-4180 CSV reader: quoted fields, escaped quotes, embedded commas and
// newlines, CRLF or LF line endings. Tracks the line the current record
// started on so record-level errors can point at the file.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Next record, or nullopt at end of input. Throws FormatError on an
    // unterminated quoted field.
    std::optional<std::vector<std::string>> next();

    // 1-based line on which the most recently returned record started.
    int record_line() const { return record_line_; }

private:
    std::istream& in_;
    int line_ = 1;
    int record_line_ = 0;
};

// Quotes a field iff it contains a comma, quote, or newline.
std::string csv_quote(const std::string& field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

// Fixed-point decimal formatting for CSV output ("%.6f" style).
// NaN renders as an empty field.
std::string format_real(double x, int decimals = 6);

// Strict full-field double parse; throws FormatError(line, ...) on anything
// that is not a finite decimal number.
double parse_real(const std::string& field, int line);

// Strict full-field integer parse with the same error contract.
int64_t parse_int(const std::string& field, int line);

// Reads a whole file into a string; throws ConfigError if unreadable.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace climalens
