#include "climalens/linreg.hpp"

#include <map>

#include "climalens/errors.hpp"

namespace climalens::linreg {

namespace {

// Accumulates the cluster meat sum_g (X_g' e_g)(X_g' e_g)'.
Eigen::MatrixXd cluster_meat(const Eigen::MatrixXd& X, const Eigen::VectorXd& e,
                             const std::vector<int>& ids, int* n_clusters) {
    std::map<int, Eigen::VectorXd> scores;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        auto [it, fresh] = scores.try_emplace(ids[static_cast<size_t>(i)],
                                              Eigen::VectorXd::Zero(X.cols()));
        it->second += e(i) * X.row(i).transpose();
    }
    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(X.cols(), X.cols());
    for (const auto& [id, s] : scores) meat += s * s.transpose();
    *n_clusters = static_cast<int>(scores.size());
    return meat;
}

}  // namespace

OlsFit ols_fit(const DesignMatrix& X, const Eigen::VectorXd& y,
               const std::vector<int>* cluster_ids) {
    Eigen::Index n = X.n(), k = X.k();
    if (n != y.size())
        throw ConfigError("design has " + std::to_string(n) + " rows but y has " +
                          std::to_string(y.size()));
    if (k == 0)
        throw ConfigError("design matrix has no columns");
    if (n < k)
        throw ConfigError("need at least as many observations as regressors: n=" +
                          std::to_string(n) + ", k=" + std::to_string(k));
    if (!X.values.allFinite() || !y.allFinite())
        throw ConfigError("non-finite values in regression input");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X.values);
    Eigen::MatrixXd R = qr.matrixR().topLeftCorner(k, k);
    double r_max = std::abs(R(0, 0));
    double r_min = std::abs(R(k - 1, k - 1));
    if (r_max == 0 || r_min < 1e-10 * r_max) {
        // Pivot position k-1 holds the most collinear original column.
        int col = qr.colsPermutation().indices()(k - 1);
        std::string name = static_cast<size_t>(col) < X.col_names.size()
                               ? X.col_names[static_cast<size_t>(col)]
                               : std::to_string(col);
        throw RankDeficient(col, name);
    }

    OlsFit fit;
    fit.n = n;
    fit.k = k;
    fit.coef = qr.solve(y);
    fit.residuals = y - X.values * fit.coef;
    fit.rss = fit.residuals.squaredNorm();
    fit.sigma2 = n > k ? fit.rss / static_cast<double>(n - k) : 0.0;

    double tss;
    if (X.intercept_included) {
        double mean = y.mean();
        tss = (y.array() - mean).matrix().squaredNorm();
    } else {
        tss = y.squaredNorm();
    }
    fit.r2 = tss > 0 ? 1.0 - fit.rss / tss : 0.0;

    // (X'X)^-1 = P R^-1 R^-T P' from the pivoted factorization X P = Q R.
    Eigen::MatrixXd r_inv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    Eigen::MatrixXd inner = r_inv * r_inv.transpose();
    const auto& perm = qr.colsPermutation();
    fit.xtx_inverse = perm * inner * perm.transpose();

    if (n > k) {
        fit.cov_classical = robust_cov(fit, X, CovFlavor::Classical);
        fit.cov_hc1 = robust_cov(fit, X, CovFlavor::Hc1);
        if (cluster_ids)
            fit.cov_cluster = robust_cov(fit, X, CovFlavor::Cluster, cluster_ids);
    } else {
        fit.cov_classical = Eigen::MatrixXd::Zero(k, k);
        fit.cov_hc1 = Eigen::MatrixXd::Zero(k, k);
    }
    return fit;
}

Eigen::MatrixXd robust_cov(const OlsFit& fit, const DesignMatrix& X, CovFlavor flavor,
                           const std::vector<int>* cluster_ids, Eigen::Index dof_k) {
    Eigen::Index n = fit.n;
    Eigen::Index k = dof_k >= 0 ? dof_k : fit.k;
    if (n <= k)
        throw ConfigError("covariance needs n > k: n=" + std::to_string(n) +
                          ", k=" + std::to_string(k));
    double dof = static_cast<double>(n - k);

    switch (flavor) {
        case CovFlavor::Classical:
            return (fit.rss / dof) * fit.xtx_inverse;
        case CovFlavor::Hc1: {
            Eigen::VectorXd e2 = fit.residuals.array().square();
            Eigen::MatrixXd meat = X.values.transpose() * e2.asDiagonal() * X.values;
            double factor = static_cast<double>(n) / dof;
            return factor * fit.xtx_inverse * meat * fit.xtx_inverse;
        }
        case CovFlavor::Cluster: {
            if (!cluster_ids || static_cast<Eigen::Index>(cluster_ids->size()) != n)
                throw DegenerateClusters("cluster ids missing or wrong length");
            int n_clusters = 0;
            Eigen::MatrixXd meat =
                cluster_meat(X.values, fit.residuals, *cluster_ids, &n_clusters);
            if (n_clusters < 2)
                throw DegenerateClusters("need at least 2 clusters, got " +
                                         std::to_string(n_clusters));
            double g = static_cast<double>(n_clusters);
            double c = g / (g - 1.0) * static_cast<double>(n - 1) / dof;
            return c * fit.xtx_inverse * meat * fit.xtx_inverse;
        }
    }
    throw ConfigError("unknown covariance flavor");
}

std::vector<double> within_transform(const std::vector<double>& values,
                                     const std::vector<int>& group_ids) {
    if (values.size() != group_ids.size())
        throw ConfigError("within_transform: values and group ids differ in length");
    std::map<int, std::pair<double, int64_t>> acc;
    for (size_t i = 0; i < values.size(); ++i) {
        auto& [sum, count] = acc[group_ids[i]];
        sum += values[i];
        count += 1;
    }
    std::vector<double> out(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        const auto& [sum, count] = acc[group_ids[i]];
        out[i] = values[i] - sum / static_cast<double>(count);
    }
    return out;
}

}  // namespace climalens::linreg
