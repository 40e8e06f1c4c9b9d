#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "cryptoforecast/error.hpp"

namespace cryptoforecast::detail {

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd residuals;
    double ssr = 0;
    Eigen::MatrixXd gram_inverse;  // (X'X)^-1
};

// Least squares through the normal equations with a pivoted LDLT. Columns
// are equilibrated to unit diagonal first so the relative-pivot rank test
// (threshold 1e-12) responds to collinearity, not to column scale.
inline OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const std::string& context) {
    const Eigen::Index k = X.cols();
    Eigen::MatrixXd gram = X.transpose() * X;
    Eigen::VectorXd scale(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double g = gram(i, i);
        if (!(g > 0)) throw NumericError(context + ": zero regressor column");
        scale(i) = 1.0 / std::sqrt(g);
    }
    Eigen::MatrixXd normalized = scale.asDiagonal() * gram * scale.asDiagonal();

    Eigen::LDLT<Eigen::MatrixXd> ldlt(normalized);
    if (ldlt.info() != Eigen::Success)
        throw NumericError(context + ": Gram matrix decomposition failed");
    const Eigen::VectorXd d = ldlt.vectorD();
    if (d.minCoeff() <= 0 || d.minCoeff() / d.maxCoeff() < 1e-12)
        throw NumericError(context + ": rank-deficient regressor matrix");

    OlsFit fit;
    fit.beta = scale.asDiagonal() * ldlt.solve(scale.asDiagonal() * (X.transpose() * y));
    fit.residuals = y - X * fit.beta;
    fit.ssr = fit.residuals.squaredNorm();
    Eigen::MatrixXd inv_normalized = ldlt.solve(Eigen::MatrixXd::Identity(k, k));
    fit.gram_inverse = scale.asDiagonal() * inv_normalized * scale.asDiagonal();
    return fit;
}

}  // namespace cryptoforecast::detail
