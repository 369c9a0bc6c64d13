#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace climalens::linreg {

struct DesignMatrix {
    Eigen::MatrixXd values;              // n x k
    std::vector<std::string> col_names;  // size k
    bool intercept_included = false;

    Eigen::Index n() const { return values.rows(); }
    Eigen::Index k() const { return values.cols(); }
};

struct OlsFit {
    Eigen::VectorXd coef;
    Eigen::VectorXd residuals;
    double rss = 0;
    double sigma2 = 0;  // rss / (n - k)
    double r2 = 0;      // about the mean of y when an intercept is included
    Eigen::MatrixXd cov_classical;
    Eigen::MatrixXd cov_hc1;
    std::optional<Eigen::MatrixXd> cov_cluster;
    Eigen::MatrixXd xtx_inverse;
    Eigen::Index n = 0;
    Eigen::Index k = 0;
};

enum class CovFlavor { Classical, Hc1, Cluster };

// Least squares via column-pivoted QR. Throws RankDeficient (naming the
// offending column) when the smallest R diagonal falls below 1e-10 of the
// largest, and ConfigError on shape mismatches or non-finite input.
// cov_cluster is filled only when cluster_ids are supplied.
OlsFit ols_fit(const DesignMatrix& X, const Eigen::VectorXd& y,
               const std::vector<int>* cluster_ids = nullptr);

// Sandwich covariance for an existing fit.
//   classical: sigma2 * (X'X)^-1
//   hc1:       n/(n-k) * (X'X)^-1 (sum_i e_i^2 x_i x_i') (X'X)^-1
//   cluster:   c * (X'X)^-1 (sum_g X_g' e_g e_g' X_g) (X'X)^-1,
//              c = G/(G-1) * (n-1)/(n-k)
// dof_k overrides the k used in the n-k denominators (the fixed-effects
// estimator passes k plus the number of absorbed groups); -1 keeps fit.k.
// Throws DegenerateClusters when cluster ids are missing, of the wrong
// length, or fewer than 2 distinct.
Eigen::MatrixXd robust_cov(const OlsFit& fit, const DesignMatrix& X, CovFlavor flavor,
                           const std::vector<int>* cluster_ids = nullptr,
                           Eigen::Index dof_k = -1);

// Subtracts each group's mean from its members.
std::vector<double> within_transform(const std::vector<double>& values,
                                     const std::vector<int>& group_ids);

}  // namespace climalens::linreg
