#pragma once

#include <iosfwd>
#include <vector>

#include "climalens/corpus.hpp"
#include "climalens/month.hpp"

namespace climalens::indices {

enum class Polarity { Pos, Neg };

// The six monthly media variables. When a month has no snippets (or no
// words) the row is kept but flagged undefined and its reals are NaN.
struct ClimateIndexRow {
    MonthKey month;
    double ln_volcov = 0;
    double cov_cc = 0;
    double cov_re = 0;
    double cov_ghi = 0;
    double pos_sent = 0;
    double neg_sent = 0;
    bool defined = true;
};

// ln(snippet count). Throws UndefinedIndex when the bucket is empty.
double vol_cov(const corpus::MonthlyBucket& bucket);

// N_theme / WC * 100. Throws UndefinedIndex when word_count is zero.
double coverage_index(const corpus::MonthlyBucket& bucket, textkit::Theme theme);

// PosW / WC * 100 or NegW / WC * 100. Throws UndefinedIndex when
// word_count is zero.
double sentiment_index(const corpus::MonthlyBucket& bucket, Polarity polarity);

// One row per bucket, in input order; undefined months flagged, not dropped.
std::vector<ClimateIndexRow> build_index_table(const std::vector<corpus::MonthlyBucket>& buckets);

struct SummaryStats {
    double mean = 0;
    double median = 0;
    double std = 0;
    double skew = 0;
    int n = 0;
};

// Mean, median (midpoint for even n), sample standard deviation and
// adjusted Fisher-Pearson skewness. Throws InsufficientData when n < 3.
SummaryStats summarize(const std::vector<double>& series);

// CSV round trip: header month,ln_volcov,cov_cc,cov_re,cov_ghi,pos_sent,
// neg_sent,defined; months YYYY-MM; reals with 6 decimals, empty when the
// row is undefined.
void write_index_csv(std::ostream& out, const std::vector<ClimateIndexRow>& rows);
std::vector<ClimateIndexRow> read_index_csv(std::istream& in);

}  // namespace climalens::indices
