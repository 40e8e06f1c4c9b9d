#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "cryptoforecast/types.hpp"

namespace cryptoforecast::granger {

// Bivariate vector autoregression estimated equation-by-equation with OLS
// over a shared regressor set: intercept plus p lags of both variables.
struct VarModel {
    int k = 2;  // number of variables
    int p = 1;  // lag order
    // coefficients(i, j): equation i, regressor j with layout
    // [intercept, lag1 var0, lag1 var1, lag2 var0, lag2 var1, ...]
    Eigen::MatrixXd coefficients;
    Eigen::MatrixXd residual_covariance;                  // k x k, divisor T_effective
    std::vector<Eigen::MatrixXd> coef_covariance;         // per equation, (k*p+1)^2
    int t_effective = 0;
    std::vector<std::string> variables;
};

// Fits on observations [p + skip, T). skip > 0 shortens the sample so that
// different lag orders can be compared on identical estimation windows.
VarModel fit_var(const AlignedPanel& panel, int p, int skip = 0);

// ln det(residual_covariance) + (2 / T_effective) * (k^2 p + k)
double var_aic(const VarModel& model);

// Minimum-AIC lag order in [1, p_max], all candidates fitted on the common
// sample of length T - p_max; ties break toward smaller p.
int select_lag(const AlignedPanel& panel, int p_max);

// P(chi2_dof >= x) through the regularized upper incomplete gamma function.
double chi2_survival(double x, int dof);

struct GrangerResult {
    std::string cause, effect;
    int p = 0;            // tested lag count
    int d = 0;            // augmentation order
    double wald_statistic = 0;
    int dof = 0;          // == p
    double p_value = 1;
    bool reject_at_5pct = false;
};

struct TodaYamamotoOptions {
    int p_max = 10;
    int d_max = 2;
    std::optional<int> fixed_p;  // skip lag selection (testing hook)
    std::optional<int> fixed_d;  // skip integration-order estimation
};

// Toda-Yamamoto procedure: fit VAR(p+d) on levels, Wald-test the first p
// lags of `cause` in the `effect` equation; the d augmentation lags stay
// unrestricted. The statistic is chi-square with p degrees of freedom.
GrangerResult toda_yamamoto(const PriceSeries& cause, const PriceSeries& effect,
                            const TodaYamamotoOptions& options = {});

void write_granger_csv(const std::vector<GrangerResult>& results, const std::string& path);

}  // namespace cryptoforecast::granger
