#include "cryptoforecast/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cryptoforecast/error.hpp"
#include "ols.hpp"

namespace cryptoforecast::stationarity {

namespace {

constexpr double kLevels[4] = {0.01, 0.025, 0.05, 0.10};

struct CvRow {
    int nobs;
    double cv[4];  // at 1%, 2.5%, 5%, 10%
};

// Finite-sample critical values, frozen from the simulation in tools/cv_sim
// (200,000 replications of the null DGP per sample size; driftless random
// walk for ADF, white noise for KPSS, same regressions and bandwidths as the
// tests below). Regenerate with `cf_cv_sim --reps 200000`.
const CvRow kAdfConstant[] = {
    {25, {-3.7074, -3.3055, -2.9813, -2.6276}},
    {50, {-3.5766, -3.2123, -2.9160, -2.5937}},
    {100, {-3.5102, -3.1672, -2.8916, -2.5825}},
    {250, {-3.4622, -3.1392, -2.8719, -2.5705}},
    {500, {-3.4373, -3.1227, -2.8629, -2.5699}},
    {1000, {-3.4369, -3.1291, -2.8706, -2.5741}},
    {2500, {-3.4288, -3.1160, -2.8566, -2.5634}},
    {10000, {-3.4266, -3.1185, -2.8604, -2.5636}},
};

const CvRow kKpssLevel[] = {
    {25, {0.5670, 0.4917, 0.4246, 0.3458}},
    {50, {0.6105, 0.5141, 0.4325, 0.3443}},
    {100, {0.6560, 0.5391, 0.4415, 0.3447}},
    {250, {0.6999, 0.5573, 0.4521, 0.3458}},
    {500, {0.7213, 0.5734, 0.4582, 0.3465}},
    {1000, {0.7284, 0.5747, 0.4603, 0.3473}},
    {2500, {0.7343, 0.5776, 0.4598, 0.3477}},
    {10000, {0.7519, 0.5822, 0.4610, 0.3468}},
};

// Linear interpolation in 1/nobs, clamped at the table ends.
std::map<double, double> interpolate_cvs(const CvRow* table, std::size_t rows, int nobs) {
    std::map<double, double> out;
    if (nobs <= table[0].nobs) {
        for (int i = 0; i < 4; ++i) out[kLevels[i]] = table[0].cv[i];
        return out;
    }
    if (nobs >= table[rows - 1].nobs) {
        for (int i = 0; i < 4; ++i) out[kLevels[i]] = table[rows - 1].cv[i];
        return out;
    }
    std::size_t hi = 1;
    while (table[hi].nobs < nobs) ++hi;
    const CvRow& a = table[hi - 1];
    const CvRow& b = table[hi];
    double w = (1.0 / nobs - 1.0 / a.nobs) / (1.0 / b.nobs - 1.0 / a.nobs);
    for (int i = 0; i < 4; ++i) out[kLevels[i]] = a.cv[i] + w * (b.cv[i] - a.cv[i]);
    return out;
}

void check_input(std::span<const double> series, std::size_t min_len, const char* test) {
    if (series.size() < min_len)
        throw DataError(std::string(test) + ": need at least " + std::to_string(min_len) +
                        " observations, got " + std::to_string(series.size()));
    for (double v : series)
        if (!std::isfinite(v)) throw DataError(std::string(test) + ": non-finite value in series");
}

double sample_sd(std::span<const double> x) {
    double mean = 0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(x.size()));
}

}  // namespace

StationarityResult adf_test(std::span<const double> series, std::optional<int> max_lag) {
    check_input(series, 20, "adf_test");
    const int T = static_cast<int>(series.size());

    const double sd = sample_sd(series);
    if (sd <= 0) throw NumericError("adf_test: zero-variance series");
    std::vector<double> z(series.begin(), series.end());
    for (double& v : z) v /= sd;  // statistic is scale-invariant; keeps the Gram well-conditioned

    std::vector<double> dz(T - 1);
    for (int i = 0; i + 1 < T; ++i) dz[i] = z[i + 1] - z[i];

    int kmax;
    if (max_lag) {
        kmax = *max_lag;
        if (kmax < 0) throw DataError("adf_test: negative max_lag");
        if (T - 1 - kmax < kmax + 3)
            throw DataError("adf_test: series too short for max_lag " + std::to_string(kmax));
    } else {
        kmax = static_cast<int>(std::floor(12.0 * std::pow(T / 100.0, 0.25)));
        kmax = std::min(kmax, (T - 1) / 2 - 2);  // keep the largest regression overdetermined
        kmax = std::max(kmax, 0);
    }

    // Row i of the regression explains dz[i] with [1, z[i], dz[i-1..i-k]].
    auto design = [&](int k, int first_row) {
        const int n = (T - 1) - first_row;
        Eigen::MatrixXd X(n, k + 2);
        Eigen::VectorXd y(n);
        for (int r = 0; r < n; ++r) {
            const int i = first_row + r;
            y(r) = dz[i];
            X(r, 0) = 1.0;
            X(r, 1) = z[i];
            for (int j = 1; j <= k; ++j) X(r, 1 + j) = dz[i - j];
        }
        return std::pair{X, y};
    };

    // AIC comparison over a common sample, then a full-sample refit.
    int best_k = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    const int n_common = (T - 1) - kmax;
    for (int k = 0; k <= kmax; ++k) {
        auto [X, y] = design(k, kmax);
        detail::OlsFit fit = detail::ols(X, y, "adf_test");
        double aic = n_common * std::log(fit.ssr / n_common) + 2.0 * (k + 2);
        if (aic < best_aic) {
            best_aic = aic;
            best_k = k;
        }
    }

    auto [X, y] = design(best_k, best_k);
    detail::OlsFit fit = detail::ols(X, y, "adf_test");
    const int n = static_cast<int>(y.size());
    const int n_params = best_k + 2;
    double sigma2 = fit.ssr / (n - n_params);
    double se = std::sqrt(sigma2 * fit.gram_inverse(1, 1));
    if (!(se > 0)) throw NumericError("adf_test: degenerate regression");

    StationarityResult res;
    res.test = TestKind::ADF;
    res.statistic = fit.beta(1) / se;
    res.lags_used = best_k;
    res.critical_values = interpolate_cvs(kAdfConstant, std::size(kAdfConstant), n);
    res.decision_5pct = res.statistic < res.critical_values.at(0.05) ? Decision::stationary
                                                                     : Decision::non_stationary;
    return res;
}

StationarityResult kpss_test(std::span<const double> series) {
    check_input(series, 20, "kpss_test");
    const int T = static_cast<int>(series.size());

    double mean = 0;
    for (double v : series) mean += v;
    mean /= T;
    std::vector<double> e(T);
    for (int i = 0; i < T; ++i) e[i] = series[i] - mean;

    double cumsum = 0, sum_s2 = 0;
    for (int i = 0; i < T; ++i) {
        cumsum += e[i];
        sum_s2 += cumsum * cumsum;
    }

    const int l = static_cast<int>(std::floor(4.0 * std::pow(T / 100.0, 0.25)));
    double gamma0 = 0;
    for (int i = 0; i < T; ++i) gamma0 += e[i] * e[i];
    gamma0 /= T;
    double lrv = gamma0;
    for (int j = 1; j <= l; ++j) {
        double gj = 0;
        for (int i = j; i < T; ++i) gj += e[i] * e[i - j];
        gj /= T;
        lrv += 2.0 * (1.0 - static_cast<double>(j) / (l + 1)) * gj;
    }
    if (lrv <= 0) throw NumericError("kpss_test: zero long-run variance");

    StationarityResult res;
    res.test = TestKind::KPSS;
    res.statistic = sum_s2 / (static_cast<double>(T) * T) / lrv;
    res.lags_used = l;
    res.critical_values = interpolate_cvs(kKpssLevel, std::size(kKpssLevel), T);
    res.decision_5pct = res.statistic < res.critical_values.at(0.05) ? Decision::stationary
                                                                     : Decision::non_stationary;
    return res;
}

std::vector<double> difference(std::span<const double> series, int times) {
    std::vector<double> out(series.begin(), series.end());
    for (int k = 0; k < times; ++k) {
        if (out.size() < 2) throw DataError("difference: series too short");
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

IntegrationOrder integration_order(std::span<const double> series, int d_max) {
    if (d_max < 0) throw DataError("integration_order: negative d_max");
    if (static_cast<int>(series.size()) < 20 + d_max)
        throw DataError("integration_order: series too short for d_max " + std::to_string(d_max));

    IntegrationOrder order;
    for (int d = 0; d <= d_max; ++d) {
        std::vector<double> z = difference(series, d);
        StationarityResult adf = adf_test(z);
        StationarityResult kpss = kpss_test(z);
        bool stationary = adf.decision_5pct == Decision::stationary &&
                          kpss.decision_5pct == Decision::stationary;
        order.trace.emplace_back(std::move(adf), std::move(kpss));
        if (stationary) {
            order.d = d;
            order.settled = true;
            return order;
        }
    }
    order.d = d_max;
    order.settled = false;
    return order;
}

}  // namespace cryptoforecast::stationarity
