#include "climalens/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "climalens/errors.hpp"

namespace climalens {

std::optional<std::vector<std::string>> CsvReader::next() {
    int c = in_.get();
    // Skip a completely empty trailing line.
    while (c == '\n' || c == '\r') {
        if (c == '\n') ++line_;
        c = in_.get();
    }
    if (c == EOF) return std::nullopt;

    record_line_ = line_;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;

    while (true) {
        if (quoted) {
            if (c == EOF) throw FormatError(record_line_, "unterminated quoted field");
            if (c == '"') {
                int peek = in_.get();
                if (peek == '"') {
                    field += '"';
                } else {
                    quoted = false;
                    if (peek != EOF) in_.putback(static_cast<char>(peek));
                }
            } else {
                if (c == '\n') ++line_;
                field += static_cast<char>(c);
            }
        } else {
            if (c == EOF || c == '\n') {
                if (c == '\n') ++line_;
                if (!field.empty() && field.back() == '\r') field.pop_back();
                fields.push_back(std::move(field));
                return fields;
            }
            if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else if (c == '"' && field.empty()) {
                quoted = true;
            } else {
                field += static_cast<char>(c);
            }
        }
        c = in_.get();
    }
}

std::string csv_quote(const std::string& field) {
    bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_quote(fields[i]);
    }
    out << '\n';
}

std::string format_real(double x, int decimals) {
    if (std::isnan(x)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

double parse_real(const std::string& field, int line) {
    try {
        size_t used = 0;
        double v = std::stod(field, &used);
        if (used != field.size() || !std::isfinite(v))
            throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw FormatError(line, "bad real value '" + field + "'");
    }
}

int64_t parse_int(const std::string& field, int line) {
    try {
        size_t used = 0;
        int64_t v = std::stoll(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw FormatError(line, "bad integer value '" + field + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
}

}  // namespace climalens
