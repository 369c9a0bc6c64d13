#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "climalens/errors.hpp"
#include "climalens/indices.hpp"

using namespace climalens;
using corpus::MonthlyBucket;
using textkit::Theme;

namespace {

MonthlyBucket bucket(int64_t snippets, int64_t words, int64_t cc, int64_t re, int64_t ghi,
                     int64_t pos, int64_t neg) {
    MonthlyBucket b;
    b.month = {2015, 6};
    b.snippet_count = snippets;
    b.word_count = words;
    b.theme_counts = {{Theme::CC, cc}, {Theme::RE, re}, {Theme::GHI, ghi}};
    b.pos_words = pos;
    b.neg_words = neg;
    return b;
}

// Ratio recomputed in extended precision from the integer counts.
double exact_percent(int64_t numerator, int64_t denominator) {
    return static_cast<double>((static_cast<long double>(numerator) * 100.0L) /
                               static_cast<long double>(denominator));
}

// Moment formulas accumulated in extended precision, written independently
// of summarize().
indices::SummaryStats oracle_summary(const std::vector<double>& xs) {
    const size_t n = xs.size();
    long double sum = 0;
    for (double x : xs) sum += x;
    long double mean = sum / static_cast<long double>(n);
    long double m2 = 0, m3 = 0;
    for (double x : xs) {
        long double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<long double>(n);
    m3 /= static_cast<long double>(n);
    indices::SummaryStats s;
    s.n = static_cast<int>(n);
    s.mean = static_cast<double>(mean);
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    s.median = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    s.std = static_cast<double>(
        std::sqrt(m2 * static_cast<long double>(n) / static_cast<long double>(n - 1)));
    long double g1 = m3 / std::pow(m2, 1.5L);
    s.skew = static_cast<double>(
        g1 * std::sqrt(static_cast<long double>(n) * (n - 1)) / static_cast<long double>(n - 2));
    return s;
}

}  // namespace

TEST_SUITE("indices") {

TEST_CASE("vol_cov of the anchor month count") {
    CHECK(std::abs(indices::vol_cov(bucket(352, 1000, 0, 0, 0, 0, 0)) - 5.8636) < 5e-4);
}

TEST_CASE("vol_cov of a single snippet is zero") {
    CHECK(indices::vol_cov(bucket(1, 10, 0, 0, 0, 0, 0)) == 0.0);
}

TEST_CASE("vol_cov of an empty month is undefined") {
    CHECK_THROWS_AS(indices::vol_cov(bucket(0, 0, 0, 0, 0, 0, 0)), UndefinedIndex);
}

TEST_CASE("coverage_index applies the percent formula") {
    CHECK(indices::coverage_index(bucket(3, 100, 7, 0, 0, 0, 0), Theme::CC) ==
          doctest::Approx(7.0));
    CHECK(indices::coverage_index(bucket(3, 500, 0, 0, 0, 0, 0), Theme::RE) == 0.0);
    CHECK_THROWS_AS(indices::coverage_index(bucket(0, 0, 0, 0, 0, 0, 0), Theme::CC),
                    UndefinedIndex);
}

TEST_CASE("sentiment_index applies the percent formula") {
    CHECK(indices::sentiment_index(bucket(3, 180, 0, 0, 0, 0, 9), indices::Polarity::Neg) ==
          doctest::Approx(5.0));
    CHECK(indices::sentiment_index(bucket(3, 180, 0, 0, 0, 0, 9), indices::Polarity::Pos) == 0.0);
    CHECK_THROWS_AS(indices::sentiment_index(bucket(1, 0, 0, 0, 0, 0, 0), indices::Polarity::Pos),
                    UndefinedIndex);
}

TEST_CASE("percent indices match the exact-fraction oracle") {
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<int64_t> words(1, 2'000'000);
    for (int trial = 0; trial < 400; ++trial) {
        int64_t wc = words(rng);
        std::uniform_int_distribution<int64_t> part(0, wc);
        int64_t cc = part(rng), pos = part(rng), neg = part(rng);
        auto b = bucket(10, wc, cc, 0, 0, pos, neg);
        CHECK(indices::coverage_index(b, Theme::CC) ==
              doctest::Approx(exact_percent(cc, wc)).epsilon(1e-12));
        CHECK(indices::sentiment_index(b, indices::Polarity::Pos) ==
              doctest::Approx(exact_percent(pos, wc)).epsilon(1e-12));
        CHECK(indices::sentiment_index(b, indices::Polarity::Neg) ==
              doctest::Approx(exact_percent(neg, wc)).epsilon(1e-12));
    }
}

TEST_CASE("scaling all counts k-fold shifts vol_cov by ln k and nothing else") {
    auto base = bucket(352, 1000, 70, 13, 5, 89, 49);
    for (int64_t k : {2, 3, 10}) {
        auto scaled = bucket(352 * k, 1000 * k, 70 * k, 13 * k, 5 * k, 89 * k, 49 * k);
        CHECK(indices::vol_cov(scaled) ==
              doctest::Approx(indices::vol_cov(base) + std::log(static_cast<double>(k))));
        CHECK(indices::coverage_index(scaled, Theme::CC) ==
              doctest::Approx(indices::coverage_index(base, Theme::CC)));
        CHECK(indices::sentiment_index(scaled, indices::Polarity::Neg) ==
              doctest::Approx(indices::sentiment_index(base, indices::Polarity::Neg)));
    }
}

TEST_CASE("build_index_table reproduces the published scale") {
    auto rows = indices::build_index_table({bucket(352, 1000, 70, 13, 5, 89, 49)});
    REQUIRE(rows.size() == 1);
    const auto& r = rows[0];
    CHECK(r.defined);
    CHECK(r.ln_volcov == doctest::Approx(5.864).epsilon(1e-3));
    CHECK(r.cov_cc == doctest::Approx(7.0));
    CHECK(r.cov_re == doctest::Approx(1.3));
    CHECK(r.cov_ghi == doctest::Approx(0.5));
    CHECK(r.pos_sent == doctest::Approx(8.9));
    CHECK(r.neg_sent == doctest::Approx(4.9));
    CHECK(r.cov_cc + r.cov_re + r.cov_ghi <= 300.0);
}

TEST_CASE("an empty month becomes an undefined row, not a dropped one") {
    auto rows = indices::build_index_table(
        {bucket(0, 0, 0, 0, 0, 0, 0), bucket(3, 10, 1, 0, 0, 0, 0)});
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].defined);
    CHECK(std::isnan(rows[0].ln_volcov));
    CHECK(rows[1].defined);
}

TEST_CASE("table rows equal the component operations") {
    auto b = bucket(77, 900, 31, 7, 2, 80, 41);
    auto rows = indices::build_index_table({b});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].ln_volcov == indices::vol_cov(b));
    CHECK(rows[0].cov_cc == indices::coverage_index(b, Theme::CC));
    CHECK(rows[0].cov_re == indices::coverage_index(b, Theme::RE));
    CHECK(rows[0].cov_ghi == indices::coverage_index(b, Theme::GHI));
    CHECK(rows[0].pos_sent == indices::sentiment_index(b, indices::Polarity::Pos));
    CHECK(rows[0].neg_sent == indices::sentiment_index(b, indices::Polarity::Neg));
}

TEST_CASE("summarize of a symmetric sample") {
    auto s = indices::summarize({1, 2, 3});
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(s.median == doctest::Approx(2.0));
    CHECK(s.std == doctest::Approx(1.0));
    CHECK(s.skew == doctest::Approx(0.0));
    CHECK(s.n == 3);
}

TEST_CASE("summarize median uses the midpoint for even n") {
    auto s = indices::summarize({4, 1, 3, 2});
    CHECK(s.median == doctest::Approx(2.5));
}

TEST_CASE("an outlier forces positive skew") {
    CHECK(indices::summarize({0, 0, 0, 10}).skew > 0);
}

TEST_CASE("summarize needs at least three points") {
    CHECK_THROWS_AS(indices::summarize({}), InsufficientData);
    CHECK_THROWS_AS(indices::summarize({1.0}), InsufficientData);
    CHECK_THROWS_AS(indices::summarize({1.0, 2.0}), InsufficientData);
}

TEST_CASE("summarize matches the moment-formula oracle") {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> noise(3.0, 2.5);
    std::vector<double> xs;
    for (int i = 0; i < 200; ++i) xs.push_back(noise(rng));
    auto got = indices::summarize(xs);
    auto want = oracle_summary(xs);
    CHECK(got.mean == doctest::Approx(want.mean).epsilon(1e-10));
    CHECK(got.median == doctest::Approx(want.median).epsilon(1e-10));
    CHECK(got.std == doctest::Approx(want.std).epsilon(1e-10));
    CHECK(got.skew == doctest::Approx(want.skew).epsilon(1e-10));
}

TEST_CASE("skew is antisymmetric under reflection about the mean") {
    std::mt19937_64 rng(43);
    std::exponential_distribution<double> expo(0.7);
    std::vector<double> xs, reflected;
    for (int i = 0; i < 150; ++i) xs.push_back(expo(rng));
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    for (double x : xs) reflected.push_back(2 * mean - x);
    CHECK(indices::summarize(xs).skew ==
          doctest::Approx(-indices::summarize(reflected).skew).epsilon(1e-9));
}

TEST_CASE("index csv round-trips, including undefined rows") {
    std::vector<indices::ClimateIndexRow> rows(2);
    rows[0].month = {2014, 1};
    rows[0].ln_volcov = 5.863631;
    rows[0].cov_cc = 7.0;
    rows[0].cov_re = 1.3;
    rows[0].cov_ghi = 0.5;
    rows[0].pos_sent = 8.9;
    rows[0].neg_sent = 4.9;
    rows[1].month = {2014, 2};
    rows[1].defined = false;
    rows[1].ln_volcov = rows[1].cov_cc = rows[1].cov_re = rows[1].cov_ghi = rows[1].pos_sent =
        rows[1].neg_sent = std::nan("");

    std::ostringstream out;
    indices::write_index_csv(out, rows);
    CHECK(out.str().substr(0, out.str().find('\n')) ==
          "month,ln_volcov,cov_cc,cov_re,cov_ghi,pos_sent,neg_sent,defined");

    std::istringstream in(out.str());
    auto back = indices::read_index_csv(in);
    REQUIRE(back.size() == 2);
    CHECK(back[0].month == MonthKey{2014, 1});
    CHECK(back[0].defined);
    CHECK(back[0].ln_volcov == doctest::Approx(5.863631));
    CHECK_FALSE(back[1].defined);
    CHECK(std::isnan(back[1].neg_sent));
}

}  // TEST_SUITE
