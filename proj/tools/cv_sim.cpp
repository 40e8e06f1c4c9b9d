// Monte Carlo estimation of the finite-sample critical values embedded in
// src/stationarity.cpp. ADF rows simulate a driftless random walk and run
// the lag-0 Dickey-Fuller regression with constant (the row label is the
// regression sample size); KPSS rows simulate white noise and use the same
// Bartlett bandwidth rule as kpss_test.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cryptoforecast/rng.hpp"

using cryptoforecast::Rng;

namespace {

double df_tstat(const std::vector<double>& y) {
    // regression rows: dy[i] on [1, y[i]], i = 0 .. T-2
    const int n = static_cast<int>(y.size()) - 1;
    double sx = 0, sd = 0;
    for (int i = 0; i < n; ++i) {
        sx += y[i];
        sd += y[i + 1] - y[i];
    }
    const double mx = sx / n, md = sd / n;
    double sxx = 0, sxy = 0, sdd = 0;
    for (int i = 0; i < n; ++i) {
        const double dx = y[i] - mx;
        const double dd = (y[i + 1] - y[i]) - md;
        sxx += dx * dx;
        sdd += dd * dd;
        sxy += dx * dd;
    }
    const double beta = sxy / sxx;
    const double ssr = sdd - sxy * sxy / sxx;
    const double sigma2 = ssr / (n - 2);
    return beta / std::sqrt(sigma2 / sxx);
}

double kpss_stat(const std::vector<double>& e_raw) {
    const int T = static_cast<int>(e_raw.size());
    double mean = 0;
    for (double v : e_raw) mean += v;
    mean /= T;
    std::vector<double> e(T);
    for (int i = 0; i < T; ++i) e[i] = e_raw[i] - mean;
    double cum = 0, s2 = 0;
    for (int i = 0; i < T; ++i) {
        cum += e[i];
        s2 += cum * cum;
    }
    const int l = static_cast<int>(std::floor(4.0 * std::pow(T / 100.0, 0.25)));
    double g0 = 0;
    for (int i = 0; i < T; ++i) g0 += e[i] * e[i];
    g0 /= T;
    double lrv = g0;
    for (int j = 1; j <= l; ++j) {
        double gj = 0;
        for (int i = j; i < T; ++i) gj += e[i] * e[i - j];
        gj /= T;
        lrv += 2.0 * (1.0 - static_cast<double>(j) / (l + 1)) * gj;
    }
    return s2 / (static_cast<double>(T) * T) / lrv;
}

double quantile(std::vector<double>& sorted_in_place, double q) {
    std::sort(sorted_in_place.begin(), sorted_in_place.end());
    const double pos = q * (sorted_in_place.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - lo;
    if (lo + 1 >= sorted_in_place.size()) return sorted_in_place.back();
    return sorted_in_place[lo] * (1 - frac) + sorted_in_place[lo + 1] * frac;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulate ADF/KPSS critical-value tables"};
    int reps = 200000;
    std::uint64_t seed = 987654321;
    std::vector<int> nobs = {25, 50, 100, 250, 500, 1000, 2500, 10000};
    app.add_option("--reps", reps, "replications per sample size");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--nobs", nobs, "sample sizes");
    CLI11_PARSE(app, argc, argv);

    std::printf("// ADF (constant case), %d replications per row\n", reps);
    std::printf("const CvRow kAdfConstant[] = {\n");
    for (int n : nobs) {
        Rng rng(seed + static_cast<std::uint64_t>(n));
        std::vector<double> stats(reps);
        std::vector<double> y(n + 1);
        for (int r = 0; r < reps; ++r) {
            y[0] = 0;
            for (int i = 1; i <= n; ++i) y[i] = y[i - 1] + rng.gaussian();
            stats[r] = df_tstat(y);
        }
        std::printf("    {%d, {%.4f, %.4f, %.4f, %.4f}},\n", n, quantile(stats, 0.01),
                    quantile(stats, 0.025), quantile(stats, 0.05), quantile(stats, 0.10));
        std::fflush(stdout);
    }
    std::printf("};\n\n");

    std::printf("// KPSS (level case), %d replications per row\n", reps);
    std::printf("const CvRow kKpssLevel[] = {\n");
    for (int n : nobs) {
        Rng rng(seed * 31 + static_cast<std::uint64_t>(n));
        std::vector<double> stats(reps);
        std::vector<double> e(n);
        for (int r = 0; r < reps; ++r) {
            for (int i = 0; i < n; ++i) e[i] = rng.gaussian();
            stats[r] = kpss_stat(e);
        }
        std::printf("    {%d, {%.4f, %.4f, %.4f, %.4f}},\n", n, quantile(stats, 0.99),
                    quantile(stats, 0.975), quantile(stats, 0.95), quantile(stats, 0.90));
        std::fflush(stdout);
    }
    std::printf("};\n");
    return 0;
}
