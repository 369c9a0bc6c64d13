#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "climalens/errors.hpp"
#include "climalens/linreg.hpp"

using namespace climalens;
using linreg::CovFlavor;
using linreg::DesignMatrix;

namespace {

DesignMatrix design(const Eigen::MatrixXd& values, bool intercept) {
    DesignMatrix X;
    X.values = values;
    X.intercept_included = intercept;
    for (Eigen::Index j = 0; j < values.cols(); ++j)
        X.col_names.push_back("x" + std::to_string(j));
    return X;
}

// Solves (X'X) b = X'y in extended precision by Gaussian elimination with
// partial pivoting. Deliberately a different route than the QR fit.
std::vector<long double> normal_equations(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::Index n = X.rows(), k = X.cols();
    std::vector<std::vector<long double>> a(static_cast<size_t>(k),
                                            std::vector<long double>(static_cast<size_t>(k), 0));
    std::vector<long double> b(static_cast<size_t>(k), 0);
    for (Eigen::Index p = 0; p < k; ++p) {
        for (Eigen::Index q = 0; q < k; ++q) {
            long double s = 0;
            for (Eigen::Index i = 0; i < n; ++i)
                s += static_cast<long double>(X(i, p)) * static_cast<long double>(X(i, q));
            a[static_cast<size_t>(p)][static_cast<size_t>(q)] = s;
        }
        long double s = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            s += static_cast<long double>(X(i, p)) * static_cast<long double>(y(i));
        b[static_cast<size_t>(p)] = s;
    }
    const size_t m = static_cast<size_t>(k);
    for (size_t col = 0; col < m; ++col) {
        size_t pivot = col;
        for (size_t r = col + 1; r < m; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            long double f = a[r][col] / a[col][col];
            for (size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<long double> beta(m);
    for (size_t r = 0; r < m; ++r) beta[r] = b[r] / a[r][r];
    return beta;
}

Eigen::MatrixXd random_design(std::mt19937_64& rng, Eigen::Index n, Eigen::Index k) {
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::MatrixXd X(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        for (Eigen::Index j = 1; j < k; ++j) X(i, j) = noise(rng);
    }
    return X;
}

}  // namespace

TEST_SUITE("linreg") {

TEST_CASE("intercept-only fit returns the mean") {
    Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(3, 1);
    Eigen::VectorXd y(3);
    y << 2, 4, 6;
    auto fit = linreg::ols_fit(design(ones, true), y);
    CHECK(fit.coef(0) == doctest::Approx(4.0));
}

TEST_CASE("an exact linear model is fit exactly") {
    Eigen::MatrixXd X(4, 2);
    X << 1, 2, 3, 1, -2, 4, 0, 5;
    Eigen::VectorXd y = 3.0 * X.col(0) - 2.0 * X.col(1);
    auto fit = linreg::ols_fit(design(X, false), y);
    CHECK(fit.coef(0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.coef(1) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(fit.rss == doctest::Approx(0.0).epsilon(1e-18));
}

TEST_CASE("random systems match the extended-precision oracle") {
    std::mt19937_64 rng(101);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_int_distribution<Eigen::Index> n_pick(9, 200), k_pick(1, 8);
    double worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::Index k = k_pick(rng);
        Eigen::Index n = std::max<Eigen::Index>(n_pick(rng), k + 1);
        Eigen::MatrixXd X = random_design(rng, n, k);
        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i) y(i) = noise(rng) * 2.0 + X.row(i).sum();
        auto fit = linreg::ols_fit(design(X, true), y);
        auto oracle = normal_equations(X, y);
        for (Eigen::Index j = 0; j < k; ++j) {
            long double denom = std::max<long double>(std::abs(oracle[static_cast<size_t>(j)]),
                                                      1e-30L);
            double rel = static_cast<double>(
                std::abs(fit.coef(j) - static_cast<double>(oracle[static_cast<size_t>(j)])) /
                denom);
            worst = std::max(worst, rel);
        }
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("residuals are orthogonal to the design") {
    std::mt19937_64 rng(103);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd X = random_design(rng, 60, 4);
        Eigen::VectorXd y(60);
        for (Eigen::Index i = 0; i < 60; ++i) y(i) = noise(rng);
        auto fit = linreg::ols_fit(design(X, true), y);
        double scale = X.cwiseAbs().maxCoeff() * y.cwiseAbs().maxCoeff();
        CHECK((X.transpose() * fit.residuals).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + scale));
    }
}

TEST_CASE("a duplicated column is rank deficient and names the culprit") {
    Eigen::MatrixXd X(5, 3);
    for (int i = 0; i < 5; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = i + 1.0;
        X(i, 2) = 2.0 * (i + 1.0);
    }
    Eigen::VectorXd y = Eigen::VectorXd::Ones(5);
    try {
        linreg::ols_fit(design(X, true), y);
        FAIL("expected RankDeficient");
    } catch (const RankDeficient& e) {
        CHECK((e.column == 1 || e.column == 2));
        CHECK(e.column_name == "x" + std::to_string(e.column));
    }
}

TEST_CASE("a zero column is rank deficient") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(6, 2);
    X.col(0).setOnes();
    Eigen::VectorXd y = Eigen::VectorXd::Ones(6);
    CHECK_THROWS_AS(linreg::ols_fit(design(X, true), y), RankDeficient);
}

TEST_CASE("shape and finiteness guards") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(2, 3);
    Eigen::VectorXd y = Eigen::VectorXd::Ones(2);
    CHECK_THROWS_AS(linreg::ols_fit(design(X, false), y), ConfigError);

    Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(4, 1);
    bad(2, 0) = std::nan("");
    Eigen::VectorXd y4 = Eigen::VectorXd::Ones(4);
    CHECK_THROWS_AS(linreg::ols_fit(design(bad, false), y4), ConfigError);

    Eigen::MatrixXd empty(3, 0);
    CHECK_THROWS_AS(linreg::ols_fit(design(empty, false), Eigen::VectorXd::Ones(3)),
                    ConfigError);
}

TEST_CASE("coefficients are invariant under column reordering") {
    std::mt19937_64 rng(107);
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::MatrixXd X = random_design(rng, 50, 5);
    Eigen::VectorXd y(50);
    for (Eigen::Index i = 0; i < 50; ++i) y(i) = noise(rng) + 2.0 * X(i, 3);

    std::vector<Eigen::Index> perm = {3, 0, 4, 1, 2};
    Eigen::MatrixXd Xp(50, 5);
    for (size_t j = 0; j < perm.size(); ++j) Xp.col(static_cast<Eigen::Index>(j)) = X.col(perm[j]);

    auto fit = linreg::ols_fit(design(X, true), y);
    auto fit_p = linreg::ols_fit(design(Xp, true), y);
    for (size_t j = 0; j < perm.size(); ++j) {
        double a = fit.coef(perm[j]);
        double b = fit_p.coef(static_cast<Eigen::Index>(j));
        CHECK(std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("rescaling a column rescales its coefficient and nothing else") {
    std::mt19937_64 rng(109);
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::MatrixXd X = random_design(rng, 40, 3);
    Eigen::VectorXd y(40);
    for (Eigen::Index i = 0; i < 40; ++i) y(i) = noise(rng) + X(i, 1) - X(i, 2);

    const double s = 37.5;
    Eigen::MatrixXd Xs = X;
    Xs.col(2) *= s;

    auto fit = linreg::ols_fit(design(X, true), y);
    auto fit_s = linreg::ols_fit(design(Xs, true), y);
    CHECK(fit_s.coef(2) == doctest::Approx(fit.coef(2) / s).epsilon(1e-10));
    Eigen::VectorXd fitted = X * fit.coef;
    Eigen::VectorXd fitted_s = Xs * fit_s.coef;
    CHECK((fitted - fitted_s).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + fitted.cwiseAbs().maxCoeff()));
}

TEST_CASE("r2 with intercept equals one minus rss over centered tss") {
    std::mt19937_64 rng(113);
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::MatrixXd X = random_design(rng, 80, 4);
    Eigen::VectorXd y(80);
    for (Eigen::Index i = 0; i < 80; ++i) y(i) = 5.0 + X(i, 1) + noise(rng);
    auto fit = linreg::ols_fit(design(X, true), y);
    double mean = y.mean();
    double tss = (y.array() - mean).matrix().squaredNorm();
    CHECK(fit.r2 == doctest::Approx(1.0 - fit.rss / tss).epsilon(1e-12));
    CHECK(fit.r2 >= 0.0);
    CHECK(fit.r2 <= 1.0);
}

TEST_CASE("all covariance flavors vanish together on a perfect fit") {
    Eigen::MatrixXd X(6, 2);
    X << 1, 1, 1, 2, 1, 3, 1, 4, 1, 5, 1, 6;
    Eigen::VectorXd y = 2.0 * X.col(0) + 0.5 * X.col(1);
    std::vector<int> ids = {0, 0, 1, 1, 2, 2};
    auto fit = linreg::ols_fit(design(X, true), y, &ids);
    REQUIRE(fit.cov_cluster.has_value());
    CHECK(fit.cov_classical.cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(fit.cov_hc1.cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(fit.cov_cluster->cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("hc1 tracks classical standard errors under homoskedasticity") {
    std::mt19937_64 rng(127);
    std::normal_distribution<double> noise(0.0, 1.0);
    const Eigen::Index n = 10'000;
    Eigen::MatrixXd X = random_design(rng, n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = 1.0 + 0.5 * X(i, 1) - 0.25 * X(i, 2) + noise(rng);
    auto fit = linreg::ols_fit(design(X, true), y);
    for (Eigen::Index j = 0; j < 3; ++j) {
        double se_c = std::sqrt(fit.cov_classical(j, j));
        double se_h = std::sqrt(fit.cov_hc1(j, j));
        CHECK(se_h == doctest::Approx(se_c).epsilon(0.25));
    }
}

TEST_CASE("singleton clusters reproduce hc1 exactly") {
    std::mt19937_64 rng(131);
    std::normal_distribution<double> noise(0.0, 1.0);
    const Eigen::Index n = 40;
    Eigen::MatrixXd X = random_design(rng, n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = noise(rng) + X(i, 1);
    std::vector<int> ids(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) ids[static_cast<size_t>(i)] = static_cast<int>(i);

    auto fit = linreg::ols_fit(design(X, true), y);
    auto hc1 = linreg::robust_cov(fit, design(X, true), CovFlavor::Hc1);
    auto cluster = linreg::robust_cov(fit, design(X, true), CovFlavor::Cluster, &ids);
    // Scalar factors: G/(G-1) * (n-1)/(n-k) with G = n collapses to the hc1
    // factor n/(n-k).
    CHECK((hc1 - cluster).cwiseAbs().maxCoeff() <= 1e-10 * hc1.cwiseAbs().maxCoeff());
}

TEST_CASE("cluster covariance needs usable ids") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(8, 2);
    X.col(0).setOnes();
    Eigen::VectorXd y = Eigen::VectorXd::Random(8);
    auto fit = linreg::ols_fit(design(X, true), y);
    std::vector<int> all_same(8, 7);
    CHECK_THROWS_AS(linreg::robust_cov(fit, design(X, true), CovFlavor::Cluster, &all_same),
                    DegenerateClusters);
    std::vector<int> short_ids(3, 0);
    CHECK_THROWS_AS(linreg::robust_cov(fit, design(X, true), CovFlavor::Cluster, &short_ids),
                    DegenerateClusters);
    CHECK_THROWS_AS(linreg::robust_cov(fit, design(X, true), CovFlavor::Cluster, nullptr),
                    DegenerateClusters);
}

TEST_CASE("covariance matrices are symmetric positive semidefinite") {
    std::mt19937_64 rng(137);
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::MatrixXd X = random_design(rng, 90, 4);
    Eigen::VectorXd y(90);
    for (Eigen::Index i = 0; i < 90; ++i) y(i) = noise(rng) * (1.0 + std::abs(X(i, 1)));
    std::vector<int> ids(90);
    for (int i = 0; i < 90; ++i) ids[static_cast<size_t>(i)] = i % 9;
    auto fit = linreg::ols_fit(design(X, true), y, &ids);
    for (const Eigen::MatrixXd& cov :
         {fit.cov_classical, fit.cov_hc1, *fit.cov_cluster}) {
        CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * cov.cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10 * cov.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("within_transform demeans per group") {
    CHECK(linreg::within_transform({1, 3}, {5, 5}) == std::vector<double>{-1, 1});
    CHECK(linreg::within_transform({4, 9, -2}, {1, 2, 3}) == std::vector<double>{0, 0, 0});
}

TEST_CASE("within_transform is idempotent and zero-mean per group") {
    std::mt19937_64 rng(139);
    std::normal_distribution<double> noise(0.0, 3.0);
    std::uniform_int_distribution<int> group(0, 11);
    std::vector<double> values;
    std::vector<int> ids;
    for (int i = 0; i < 500; ++i) {
        values.push_back(noise(rng) + group(rng));
        ids.push_back(group(rng));
    }
    auto once = linreg::within_transform(values, ids);
    auto twice = linreg::within_transform(once, ids);
    std::map<int, std::pair<double, int>> sums;
    for (size_t i = 0; i < once.size(); ++i) {
        CHECK(std::abs(once[i] - twice[i]) <= 1e-12);
        sums[ids[i]].first += once[i];
        sums[ids[i]].second += 1;
    }
    for (const auto& [id, sc] : sums)
        CHECK(std::abs(sc.first / sc.second) <= 1e-12);
}

}  // TEST_SUITE
