#include "climalens/indices.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "climalens/csvio.hpp"
#include "climalens/errors.hpp"

namespace climalens::indices {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int64_t theme_count(const corpus::MonthlyBucket& bucket, textkit::Theme theme) {
    auto it = bucket.theme_counts.find(theme);
    return it == bucket.theme_counts.end() ? 0 : it->second;
}

}  // namespace

double vol_cov(const corpus::MonthlyBucket& bucket) {
    if (bucket.snippet_count <= 0)
        throw UndefinedIndex("vol_cov undefined for " + bucket.month.str() +
                             ": no snippets");
    return std::log(static_cast<double>(bucket.snippet_count));
}

double coverage_index(const corpus::MonthlyBucket& bucket, textkit::Theme theme) {
    if (bucket.word_count <= 0)
        throw UndefinedIndex("coverage undefined for " + bucket.month.str() +
                             ": no words");
    return static_cast<double>(theme_count(bucket, theme)) /
           static_cast<double>(bucket.word_count) * 100.0;
}

double sentiment_index(const corpus::MonthlyBucket& bucket, Polarity polarity) {
    if (bucket.word_count <= 0)
        throw UndefinedIndex("sentiment undefined for " + bucket.month.str() +
                             ": no words");
    int64_t count = polarity == Polarity::Pos ? bucket.pos_words : bucket.neg_words;
    return static_cast<double>(count) / static_cast<double>(bucket.word_count) * 100.0;
}

std::vector<ClimateIndexRow> build_index_table(
    const std::vector<corpus::MonthlyBucket>& buckets) {
    std::vector<ClimateIndexRow> rows;
    rows.reserve(buckets.size());
    for (const auto& b : buckets) {
        ClimateIndexRow row;
        row.month = b.month;
        if (b.snippet_count <= 0 || b.word_count <= 0) {
            row.defined = false;
            row.ln_volcov = row.cov_cc = row.cov_re = row.cov_ghi = kNaN;
            row.pos_sent = row.neg_sent = kNaN;
        } else {
            row.ln_volcov = vol_cov(b);
            row.cov_cc = coverage_index(b, textkit::Theme::CC);
            row.cov_re = coverage_index(b, textkit::Theme::RE);
            row.cov_ghi = coverage_index(b, textkit::Theme::GHI);
            row.pos_sent = sentiment_index(b, Polarity::Pos);
            row.neg_sent = sentiment_index(b, Polarity::Neg);
        }
        rows.push_back(row);
    }
    return rows;
}

SummaryStats summarize(const std::vector<double>& series) {
    size_t n = series.size();
    if (n < 3)
        throw InsufficientData("summarize needs at least 3 observations, got " +
                               std::to_string(n));
    SummaryStats s;
    s.n = static_cast<int>(n);

    double sum = 0;
    for (double x : series) sum += x;
    s.mean = sum / static_cast<double>(n);

    std::vector<double> sorted = series;
    std::sort(sorted.begin(), sorted.end());
    s.median = n % 2 == 1 ? sorted[n / 2]
                          : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    double m2 = 0, m3 = 0;
    for (double x : series) {
        double d = x - s.mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    double nd = static_cast<double>(n);
    s.std = std::sqrt(m2 / (nd - 1));

    // Adjusted Fisher-Pearson: g1 * sqrt(n(n-1)) / (n-2) with
    // g1 = (m3/n) / (m2/n)^(3/2).
    if (m2 == 0) {
        s.skew = 0;
    } else {
        double g1 = (m3 / nd) / std::pow(m2 / nd, 1.5);
        s.skew = g1 * std::sqrt(nd * (nd - 1)) / (nd - 2);
    }
    return s;
}

void write_index_csv(std::ostream& out, const std::vector<ClimateIndexRow>& rows) {
    write_csv_row(out, {"month", "ln_volcov", "cov_cc", "cov_re", "cov_ghi",
                        "pos_sent", "neg_sent", "defined"});
    for (const auto& r : rows) {
        auto real = [&](double v) { return r.defined ? format_real(v) : std::string(); };
        write_csv_row(out, {r.month.str(), real(r.ln_volcov), real(r.cov_cc),
                            real(r.cov_re), real(r.cov_ghi), real(r.pos_sent),
                            real(r.neg_sent), r.defined ? "true" : "false"});
    }
}

std::vector<ClimateIndexRow> read_index_csv(std::istream& in) {
    CsvReader reader(in);
    auto header = reader.next();
    static const std::vector<std::string> kHeader = {
        "month", "ln_volcov", "cov_cc", "cov_re", "cov_ghi",
        "pos_sent", "neg_sent", "defined"};
    if (!header || *header != kHeader)
        throw FormatError(1, "bad index CSV header");
    std::vector<ClimateIndexRow> rows;
    while (auto row = reader.next()) {
        int line = reader.record_line();
        if (row->size() != 8)
            throw FormatError(line, "expected 8 fields, got " + std::to_string(row->size()));
        ClimateIndexRow r;
        try {
            r.month = MonthKey::parse((*row)[0]);
        } catch (const FormatError& e) {
            throw FormatError(line, e.what());
        }
        const std::string& flag = (*row)[7];
        if (flag != "true" && flag != "false")
            throw FormatError(line, "defined must be true or false, got '" + flag + "'");
        r.defined = flag == "true";
        auto real = [&](const std::string& field) -> double {
            if (!r.defined && field.empty()) return kNaN;
            return parse_real(field, line);
        };
        r.ln_volcov = real((*row)[1]);
        r.cov_cc = real((*row)[2]);
        r.cov_re = real((*row)[3]);
        r.cov_ghi = real((*row)[4]);
        r.pos_sent = real((*row)[5]);
        r.neg_sent = real((*row)[6]);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace climalens::indices
