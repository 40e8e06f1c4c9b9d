#include "cryptoforecast/granger.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "cryptoforecast/csv.hpp"
#include "cryptoforecast/error.hpp"
#include "cryptoforecast/stationarity.hpp"
#include "ols.hpp"

namespace cryptoforecast::granger {

namespace {

// ln Gamma via Lanczos; good to ~15 significant digits for positive a.
double log_gamma(double a) {
    static const double cof[14] = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
        -0.491913816097620199,   0.339946499848118887e-4, 0.465236289270485756e-4,
        -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
        0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
        -0.261908384015814087e-4, 0.368991826595316234e-5};
    double x = a, y = a;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (int j = 0; j < 14; ++j) ser += cof[j] / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

// Regularized lower incomplete gamma P(a, x) by series expansion (x < a+1).
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 1000; ++n) {
        ++ap;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
    }
    throw NumericError("incomplete gamma series failed to converge");
}

// Regularized upper incomplete gamma Q(a, x) by continued fraction (x >= a+1).
double gamma_q_cf(double a, double x) {
    const double fpmin = std::numeric_limits<double>::min() / 1e-16;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= 1e-16)
            return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
    }
    throw NumericError("incomplete gamma continued fraction failed to converge");
}

}  // namespace

double chi2_survival(double x, int dof) {
    if (dof < 1) throw DataError("chi2_survival: dof must be positive");
    if (x < 0) throw DataError("chi2_survival: negative statistic");
    if (x == 0) return 1.0;
    const double a = dof / 2.0;
    const double z = x / 2.0;
    if (z < a + 1.0) return 1.0 - gamma_p_series(a, z);
    return gamma_q_cf(a, z);
}

VarModel fit_var(const AlignedPanel& panel, int p, int skip) {
    if (p < 1) throw DataError("fit_var: lag order must be >= 1");
    if (skip < 0) throw DataError("fit_var: negative skip");
    const int k = static_cast<int>(panel.n_coins());
    if (k != 2) throw DataError("fit_var: expected a 2-coin panel, got " + std::to_string(k));
    const int T = static_cast<int>(panel.n_rows());
    const int first = p + skip;
    const int n = T - first;
    const int n_reg = k * p + 1;
    if (n < n_reg + 10)
        throw DataError("fit_var: sample too short for p=" + std::to_string(p) + " (T=" +
                        std::to_string(T) + ")");

    Eigen::MatrixXd X(n, n_reg);
    Eigen::MatrixXd Y(n, k);
    for (int r = 0; r < n; ++r) {
        const int t = first + r;
        X(r, 0) = 1.0;
        for (int lag = 1; lag <= p; ++lag)
            for (int v = 0; v < k; ++v) X(r, 1 + (lag - 1) * k + v) = panel.columns[v][t - lag];
        for (int v = 0; v < k; ++v) Y(r, v) = panel.columns[v][t];
    }

    VarModel model;
    model.k = k;
    model.p = p;
    model.t_effective = n;
    model.variables = panel.coins;
    model.coefficients.resize(k, n_reg);
    Eigen::MatrixXd residuals(n, k);

    Eigen::MatrixXd gram_inverse;
    for (int eq = 0; eq < k; ++eq) {
        detail::OlsFit fit = detail::ols(X, Y.col(eq), "fit_var");
        model.coefficients.row(eq) = fit.beta.transpose();
        residuals.col(eq) = fit.residuals;
        if (eq == 0) gram_inverse = fit.gram_inverse;
    }
    model.residual_covariance = residuals.transpose() * residuals / static_cast<double>(n);
    for (int eq = 0; eq < k; ++eq)
        model.coef_covariance.push_back(model.residual_covariance(eq, eq) * gram_inverse);
    return model;
}

double var_aic(const VarModel& model) {
    Eigen::LLT<Eigen::MatrixXd> llt(model.residual_covariance);
    double det;
    if (llt.info() == Eigen::Success) {
        det = 0;
        for (int i = 0; i < model.k; ++i) det += 2.0 * std::log(llt.matrixL()(i, i));
    } else {
        det = std::log(model.residual_covariance.determinant());
    }
    if (!std::isfinite(det))
        throw NumericError("var_aic: non-positive residual covariance determinant");
    double params = static_cast<double>(model.k) * model.k * model.p + model.k;
    return det + 2.0 / model.t_effective * params;
}

int select_lag(const AlignedPanel& panel, int p_max) {
    if (p_max < 1) throw DataError("select_lag: p_max must be >= 1");
    int best_p = 1;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= p_max; ++p) {
        VarModel m = fit_var(panel, p, p_max - p);
        double aic = var_aic(m);
        if (aic < best_aic) {
            best_aic = aic;
            best_p = p;
        }
    }
    return best_p;
}

GrangerResult toda_yamamoto(const PriceSeries& cause, const PriceSeries& effect,
                            const TodaYamamotoOptions& options) {
    if (cause.timestamps != effect.timestamps)
        throw DataError("toda_yamamoto: series not aligned (" + cause.coin + " vs " +
                        effect.coin + ")");

    int d;
    if (options.fixed_d) {
        d = *options.fixed_d;
    } else {
        auto oc = stationarity::integration_order(cause.values, options.d_max);
        auto oe = stationarity::integration_order(effect.values, options.d_max);
        d = std::max(oc.d, oe.d);
    }

    AlignedPanel panel;
    panel.coins = {cause.coin, effect.coin};
    panel.timestamps = cause.timestamps;
    panel.columns = {cause.values, effect.values};
    panel.resolution = Resolution::daily;

    const int p = options.fixed_p ? *options.fixed_p : select_lag(panel, options.p_max);
    VarModel model = fit_var(panel, p + d);

    // Restriction: coefficients of cause (variable 0) at lags 1..p in the
    // effect equation (equation 1) are jointly zero.
    Eigen::VectorXd b(p);
    Eigen::MatrixXd v(p, p);
    const int eq = 1;
    auto reg_index = [&](int lag) { return 1 + (lag - 1) * model.k + 0; };
    for (int i = 0; i < p; ++i) {
        b(i) = model.coefficients(eq, reg_index(i + 1));
        for (int j = 0; j < p; ++j)
            v(i, j) = model.coef_covariance[eq](reg_index(i + 1), reg_index(j + 1));
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(v);
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0)
        throw NumericError("toda_yamamoto: singular restriction covariance");
    const Eigen::VectorXd d_ = ldlt.vectorD();
    if (d_.minCoeff() / d_.maxCoeff() < 1e-12)
        throw NumericError("toda_yamamoto: restriction covariance numerically rank-deficient");
    double wald = b.dot(ldlt.solve(b));

    GrangerResult res;
    res.cause = cause.coin;
    res.effect = effect.coin;
    res.p = p;
    res.d = d;
    res.wald_statistic = wald;
    res.dof = p;
    res.p_value = chi2_survival(wald, p);
    res.reject_at_5pct = res.p_value <= 0.05;
    return res;
}

void write_granger_csv(const std::vector<GrangerResult>& results, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "cause,effect,p,d,chi2,dof,p_value,reject_5pct\n";
    for (const auto& r : results) {
        out << r.cause << ',' << r.effect << ',' << r.p << ',' << r.d << ','
            << csv::format_number(r.wald_statistic) << ',' << r.dof << ','
            << csv::format_number(r.p_value) << ',' << (r.reject_at_5pct ? "true" : "false")
            << '\n';
    }
}

}  // namespace cryptoforecast::granger
